#include "smc/env.hpp"

#include <algorithm>
#include <cmath>

namespace decopt::smc {

using policy::Decision;
using policy::Environment;
using policy::Observation;
using policy::VirtualParams;

int demand_decode_scale() {
  return static_cast<int>(std::ceil(5.0 * 10.0 + 4.0 * std::sqrt(50.0)));
}

ObservedCase env_case(const SmcInstance& instance, std::uint64_t seed) {
  Rng rng = Rng(seed).child("smc-case");
  ObservedCase out;
  out.o = rng.uniform(1.0, 10.0);
  out.demands = sample_demands(instance, out.o, rng);
  return out;
}

namespace {

class SmcEnv : public Environment {
 public:
  SmcEnv(SmcInstance inst, double o_max, SolveSettings settings)
      : inst_(std::move(inst)), o_max_(o_max), settings_(settings) {
    inst_.validate();
  }

  Observation reset(std::uint64_t seed) override {
    const ObservedCase c = env_case(inst_, seed);
    o_ = c.o;
    realized_ = c.demands;
    done_ = false;
    return Observation({o_}, {o_max_});
  }

  StepResult step(const VirtualParams& action) override {
    if (done_) throw std::logic_error("step called on a finished episode");
    if (static_cast<int>(action.size()) != inst_.n_elements)
      throw std::invalid_argument("action must predict one coverage per element");
    const double scale = static_cast<double>(demand_decode_scale());
    DemandVector predicted(inst_.n_elements);
    for (int i = 0; i < inst_.n_elements; ++i)
      predicted[i] = std::max(0L, std::lround(action[i] * scale));
    const CoverSolution sol = solve_deterministic(inst_, predicted, settings_);
    StepResult sr;
    sr.cost = recourse_cost(inst_, sol.x, realized_);
    sr.decision.values = sol.x;
    sr.decision.feasible = decision_residual(inst_, sol.x, predicted) <= 1e-6;
    sr.done = done_ = true;
    return sr;
  }

  int horizon() const override { return 1; }
  double discount() const override { return 1.0; }
  int observation_dim() const override { return 1; }
  int action_dim() const override { return inst_.n_elements; }

 private:
  SmcInstance inst_;
  double o_max_;
  SolveSettings settings_;
  double o_ = 1.0;
  DemandVector realized_;
  bool done_ = false;
};

}  // namespace

std::unique_ptr<Environment> make_smc_env(const SmcInstance& instance, double o_max,
                                          const SolveSettings& settings) {
  return std::make_unique<SmcEnv>(instance, o_max, settings);
}

double decision_residual(const SmcInstance& inst, const std::vector<double>& x,
                         const DemandVector& requested) {
  double r = 0.0;
  for (int j = 0; j < inst.n_sets; ++j) {
    r = std::max(r, -x[j]);
    r = std::max(r, std::abs(x[j] - std::round(x[j])));
  }
  std::vector<double> covered(inst.n_elements, 0.0);
  for (int j = 0; j < inst.n_sets; ++j)
    for (int i : inst.covers[j]) covered[i] += x[j];
  for (int i = 0; i < inst.n_elements; ++i)
    r = std::max(r, static_cast<double>(requested[i]) - covered[i]);
  return r;
}

}  // namespace decopt::smc
