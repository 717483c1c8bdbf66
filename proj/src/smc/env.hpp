#pragma once

#include <memory>

#include "policy/policy.hpp"
#include "smc/models.hpp"

namespace decopt::smc {

// Upper end of the demand decode range: largest rate times largest
// observable plus four standard deviations.
int demand_decode_scale();

// One-step environment: observe o, predict coverage requirements, pay the
// recourse cost of the induced production plan against the realized
// demands. Actions are real vectors converted to the closest nonnegative
// integers after rescaling by demand_decode_scale().
std::unique_ptr<policy::Environment> make_smc_env(const SmcInstance& instance, double o_max,
                                                  const SolveSettings& settings = {});

// Decision check used by the feasibility harness: integral, nonnegative,
// and covering the requested demands.
double decision_residual(const SmcInstance& instance, const std::vector<double>& x,
                         const DemandVector& requested);

// The (observable, realized demands) case an environment draws for a given
// reset seed; exposed so baselines can be scored on identical cases.
ObservedCase env_case(const SmcInstance& instance, std::uint64_t seed);

}  // namespace decopt::smc
