#pragma once

#include <memory>

#include "ems/dispatch.hpp"
#include "ems/instance.hpp"
#include "policy/policy.hpp"

namespace decopt::ems {

enum class EmsVariant { SingleStep, Sequential, EndToEnd };

// Frozen normalization constants shared by every environment built on the
// same instance family.
struct EmsScales {
  std::vector<double> res;   // per-stage maxima
  std::vector<double> load;
  double charge = 1.0;
  double price = 1.0;        // action decode: c0 = action * price
};

EmsScales default_scales(const EmsInstance& instance);

// The realization an environment draws for a given reset seed; exposed so
// oracles can be computed on exactly the same noise.
EmsRealization env_realization(const EmsInstance& instance, std::uint64_t seed);

// Environment factory. Acting conventions per variant:
//   SingleStep  action in R^n: virtual storage costs for the whole day.
//   Sequential  action in R: the virtual storage cost of the current stage.
//   EndToEnd    action in R^3: raw flows (storage, res, diesel) in [-1,1];
//               the grid closes the balance; infeasible actions terminate
//               the episode with cost 10000 (reward -10000).
std::unique_ptr<policy::Environment> make_env(const EmsInstance& instance, EmsVariant variant,
                                              const EmsScales& scales);

// Projection-based baseline: the action proposes all four delivered flows,
// which are projected onto the balance hyperplane intersected with the
// physical boxes before execution.
std::unique_ptr<policy::Environment> make_safety_env(const EmsInstance& instance,
                                                     const EmsScales& scales);

// Penalty charged by the end-to-end environment on infeasible actions.
constexpr double kInfeasiblePenalty = 10000.0;

}  // namespace decopt::ems
