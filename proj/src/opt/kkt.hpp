#pragma once

#include "opt/model.hpp"

namespace decopt::opt {

struct DualsUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Duals {
  std::vector<double> rows;
  std::vector<double> lower;
  std::vector<double> upper;
};

// Multipliers of an optimal LP solve. Throws DualsUnavailable when the
// result carries none (MIP solves).
Duals extract_duals(const SolveResult& result, const LinearProgram& lp);

struct KktReport {
  double stationarity = 0.0;      // max |c - A'y - mu + nu|
  double primal = 0.0;            // max row/bound violation
  double complementarity = 0.0;   // max |multiplier * slack|
  double dual_sign = 0.0;         // max sign violation of a multiplier
  double duality_gap = 0.0;       // |primal obj - dual obj|
  double max_residual() const;
};

KktReport kkt_residuals(const LinearProgram& lp, const SolveResult& result);

// b'y + l'mu - u'nu under this project's sign convention.
double dual_objective(const LinearProgram& lp, const SolveResult& result);

}  // namespace decopt::opt
