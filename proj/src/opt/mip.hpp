#pragma once

#include "opt/model.hpp"

namespace decopt::opt {

struct MipOptions {
  double gap_tol = 0.0;  // relative optimality gap at which search stops
  long node_limit = 200000;
  double time_limit_s = kInf;
  // Optional feasible point used to seed the incumbent (must satisfy the
  // model after integer snapping, otherwise it is ignored).
  const std::vector<double>* initial_incumbent = nullptr;
};

// Best-bound branch and bound on the LP relaxation. Indicator constraints
// are compiled to big-M rows with per-row constants derived from variable
// bounds. Branching: most fractional variable, ties to the lowest index.
SolveResult solve_mip(const MipModel& mip, const MipOptions& options);
SolveResult solve_mip(const MipModel& mip, double gap_tol);

}  // namespace decopt::opt
