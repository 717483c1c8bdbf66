#include "policy/policy.hpp"

#include <algorithm>
#include <cmath>

namespace decopt::policy {

Observation::Observation(std::vector<double> v, std::vector<double> s)
    : values(std::move(v)), scale_reference(std::move(s)) {
  if (values.size() != scale_reference.size())
    throw std::invalid_argument("observation and scale reference differ in length");
}

Observation Observation::normalized() const {
  Observation out;
  out.values.resize(values.size());
  out.scale_reference.assign(values.size(), 1.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double s = scale_reference[i];
    if (!(s > 0.0)) throw std::invalid_argument("scale reference must be strictly positive");
    out.values[i] = std::clamp(values[i] / s, 0.0, 1.0);
  }
  return out;
}

std::pair<VirtualParams, Decision> act(const DecomposedPolicy& policy, const Observation& x) {
  VirtualParams y = policy.model(x);
  Decision z = policy.opt_layer(x, y);
  if (!z.feasible)
    throw OptLayerInfeasible("optimization layer returned an infeasible decision");
  return {std::move(y), std::move(z)};
}

Trajectory rollout(Environment& env,
                   const std::function<VirtualParams(const Observation&)>& actor,
                   std::uint64_t seed) {
  Trajectory traj;
  Observation x = env.reset(seed);
  const double gamma = env.discount();
  double weight = 1.0;
  for (int k = 0; k < env.horizon(); ++k) {
    VirtualParams y = actor(x);
    Environment::StepResult sr = env.step(y);
    traj.steps.push_back({x, std::move(y), sr.decision, sr.cost});
    traj.ret += weight * sr.cost;
    weight *= gamma;
    if (sr.failed) traj.failed = true;
    if (sr.done) break;
    x = std::move(sr.obs);
  }
  return traj;
}

Trajectory rollout(Environment& env, const DecomposedPolicy& policy, std::uint64_t seed) {
  return rollout(env, policy.model, seed);
}

double Trajectory::recompute_return(double gamma) const {
  double acc = 0.0;
  double weight = 1.0;
  for (const auto& s : steps) {
    acc += weight * s.cost;
    weight *= gamma;
  }
  return acc;
}

EvalSummary evaluate_policy(Environment& env,
                            const std::function<VirtualParams(const Observation&)>& actor,
                            const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("evaluate_policy needs at least one seed");
  EvalSummary out;
  for (std::uint64_t s : seeds) {
    const Trajectory t = rollout(env, actor, s);
    out.per_instance.push_back(t.ret);
    out.mean_cost += t.ret;
  }
  out.mean_cost /= static_cast<double>(seeds.size());
  return out;
}

}  // namespace decopt::policy
