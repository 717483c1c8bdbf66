#pragma once

#include "opt/model.hpp"

namespace decopt::opt {

// Revised primal simplex for bounded-variable LPs.
//
// Internals: shift every finitely-bounded-below variable to lower bound 0,
// negate variables bounded only from above, split free variables into a
// positive and a negative part, add one slack per inequality row, then run
// a two-phase method (artificials only where the slack crash is
// infeasible). Dantzig pricing switches to Bland's rule after
// 3 * num_vars consecutive degenerate pivots.
SolveResult solve_lp(const LinearProgram& lp);

// Same, with externally supplied bound vectors (used by branch and bound
// so nodes do not have to copy the row data).
SolveResult solve_lp(const LinearProgram& lp, const std::vector<double>& lower,
                     const std::vector<double>& upper);

}  // namespace decopt::opt
