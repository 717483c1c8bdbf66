#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace decopt::policy {

// Raw observable state plus the per-entry maxima used to rescale it into
// [0,1]. Scale references are frozen at generation time.
struct Observation {
  std::vector<double> values;
  std::vector<double> scale_reference;

  Observation() = default;
  Observation(std::vector<double> v, std::vector<double> s);
  // Entry-wise values / scale_reference, clipped into [0,1]; the result
  // carries unit scales so normalization is idempotent.
  Observation normalized() const;
};

using VirtualParams = std::vector<double>;

struct Decision {
  std::vector<double> values;
  bool feasible = false;
};

struct OptLayerInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sequential decision process contract. `step` consumes the ML-side action
// (virtual parameters); the optimization layer embedded in the environment
// turns it into an executable decision, which is reported back.
class Environment {
 public:
  virtual ~Environment() = default;

  struct StepResult {
    Observation obs;      // next observation (empty when done)
    Decision decision;    // what was actually executed
    double cost = 0.0;    // stage cost f_k (true cost, before any scaling)
    bool done = false;
    bool failed = false;  // episode aborted on an infeasible action
  };

  virtual Observation reset(std::uint64_t seed) = 0;
  virtual StepResult step(const VirtualParams& action) = 0;
  virtual int horizon() const = 0;          // end of horizon (finite here)
  virtual double discount() const = 0;      // 1 for finite horizons
  virtual int observation_dim() const = 0;
  virtual int action_dim() const = 0;
};

// Two-block policy: an unconstrained model h mapping observations to
// virtual parameters, and an optimization layer g mapping (x, y) to a
// feasible decision.
struct DecomposedPolicy {
  std::function<VirtualParams(const Observation&)> model;
  std::function<Decision(const Observation&, const VirtualParams&)> opt_layer;
};

// One policy evaluation: y = h(x), z = g(x, y).
std::pair<VirtualParams, Decision> act(const DecomposedPolicy& policy, const Observation& x);

struct Trajectory {
  struct Step {
    Observation x;
    VirtualParams y;
    Decision z;
    double cost = 0.0;
  };
  std::vector<Step> steps;
  double ret = 0.0;       // sum of gamma^k * cost_k
  bool failed = false;

  double recompute_return(double gamma) const;
};

// Runs one full episode of `env` under `actor`, starting from `seed`.
Trajectory rollout(Environment& env,
                   const std::function<VirtualParams(const Observation&)>& actor,
                   std::uint64_t seed);

// Convenience overload for a decomposed policy (uses its model as actor).
Trajectory rollout(Environment& env, const DecomposedPolicy& policy, std::uint64_t seed);

struct EvalSummary {
  double mean_cost = 0.0;
  std::vector<double> per_instance;
};

// Empirical estimate of the expected episode cost over the given seeds.
EvalSummary evaluate_policy(Environment& env,
                            const std::function<VirtualParams(const Observation&)>& actor,
                            const std::vector<std::uint64_t>& seeds);

}  // namespace decopt::policy
