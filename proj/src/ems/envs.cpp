#include "ems/envs.hpp"

#include <algorithm>
#include <cmath>

#include "ems/safety.hpp"

namespace decopt::ems {

using policy::Decision;
using policy::Environment;
using policy::Observation;
using policy::VirtualParams;

EmsScales default_scales(const EmsInstance& instance) {
  EmsScales s;
  double res_max = 1e-6, load_max = 1e-6, price_max = 1e-6;
  for (int k = 0; k < instance.n; ++k) {
    res_max = std::max(res_max, instance.res_forecast[k]);
    load_max = std::max(load_max, instance.load_forecast[k]);
    price_max = std::max(price_max, instance.buy_price[k]);
  }
  // Realizations overshoot forecasts by up to ~10%; keep them inside [0,1].
  s.res.assign(instance.n, 1.25 * res_max);
  s.load.assign(instance.n, 1.25 * load_max);
  s.charge = std::max(instance.capacity, 1e-6);
  s.price = price_max;
  return s;
}

EmsRealization env_realization(const EmsInstance& instance, std::uint64_t seed) {
  Rng rng = Rng(seed).child("ems-realization");
  return sample_realization(instance, rng);
}

namespace {

std::vector<double> forecast_obs(const EmsInstance& inst) {
  std::vector<double> v;
  v.insert(v.end(), inst.res_forecast.begin(), inst.res_forecast.end());
  v.insert(v.end(), inst.load_forecast.begin(), inst.load_forecast.end());
  return v;
}

std::vector<double> forecast_scales(const EmsScales& s) {
  std::vector<double> v;
  v.insert(v.end(), s.res.begin(), s.res.end());
  v.insert(v.end(), s.load.begin(), s.load.end());
  return v;
}

Decision dispatch_decision(const StageDispatch& d) {
  Decision z;
  z.values = {d.storage, d.res, d.grid(), d.diesel};
  z.feasible = true;
  return z;
}

// Observation for the stage-wise variants: battery charge, both forecast
// series, one-hot stage index.
class StagewiseBase : public Environment {
 public:
  StagewiseBase(EmsInstance inst, EmsScales scales)
      : inst_(std::move(inst)), scales_(std::move(scales)) {
    inst_.validate();
  }

  Observation reset(std::uint64_t seed) override {
    real_ = env_realization(inst_, seed);
    k_ = 0;
    charge_ = inst_.init_charge;
    done_ = false;
    return observe();
  }

  int horizon() const override { return inst_.n; }
  double discount() const override { return 1.0; }
  int observation_dim() const override { return 3 * inst_.n + 1; }

 protected:
  Observation observe() const {
    std::vector<double> v, s;
    v.push_back(charge_);
    s.push_back(scales_.charge);
    const auto f = forecast_obs(inst_);
    const auto fs = forecast_scales(scales_);
    v.insert(v.end(), f.begin(), f.end());
    s.insert(s.end(), fs.begin(), fs.end());
    for (int i = 0; i < inst_.n; ++i) {
      v.push_back(i == k_ ? 1.0 : 0.0);
      s.push_back(1.0);
    }
    return Observation(std::move(v), std::move(s));
  }

  void require_active() const {
    if (done_) throw std::logic_error("step called on a finished episode");
  }

  EmsInstance inst_;
  EmsScales scales_;
  EmsRealization real_;
  int k_ = 0;
  double charge_ = 0.0;
  bool done_ = false;
};

class SingleStepEnv : public Environment {
 public:
  SingleStepEnv(EmsInstance inst, EmsScales scales)
      : inst_(std::move(inst)), scales_(std::move(scales)) {
    inst_.validate();
  }

  Observation reset(std::uint64_t seed) override {
    real_ = env_realization(inst_, seed);
    done_ = false;
    return Observation(forecast_obs(inst_), forecast_scales(scales_));
  }

  StepResult step(const VirtualParams& action) override {
    if (done_) throw std::logic_error("step called on a finished episode");
    if (static_cast<int>(action.size()) != inst_.n)
      throw std::invalid_argument("single-step action must have one cost per stage");
    VirtualCostSchedule schedule(inst_.n);
    for (int k = 0; k < inst_.n; ++k) schedule[k] = action[k] * scales_.price;
    const DayResult day = simulate_day(inst_, real_, schedule);
    StepResult sr;
    sr.cost = day.true_cost;
    sr.done = done_ = true;
    Decision z;
    for (const auto& d : day.stages) {
      z.values.push_back(d.storage);
      z.values.push_back(d.res);
      z.values.push_back(d.grid());
      z.values.push_back(d.diesel);
    }
    z.feasible = true;
    sr.decision = std::move(z);
    return sr;
  }

  int horizon() const override { return 1; }
  double discount() const override { return 1.0; }
  int observation_dim() const override { return 2 * inst_.n; }
  int action_dim() const override { return inst_.n; }

 private:
  EmsInstance inst_;
  EmsScales scales_;
  EmsRealization real_;
  bool done_ = false;
};

class SequentialEnv : public StagewiseBase {
 public:
  using StagewiseBase::StagewiseBase;

  StepResult step(const VirtualParams& action) override {
    require_active();
    if (action.size() != 1)
      throw std::invalid_argument("sequential action is the current stage's virtual cost");
    const double c0 = action[0] * scales_.price;
    const StageDispatch d = solve_stage(inst_, charge_, c0, real_.res[k_], real_.load[k_], k_);
    StepResult sr;
    sr.cost = stage_true_cost(inst_, k_, d);
    sr.decision = dispatch_decision(d);
    charge_ = d.charge_after;
    ++k_;
    sr.done = k_ >= inst_.n;
    done_ = sr.done;
    if (!sr.done) sr.obs = observe();
    return sr;
  }

  int action_dim() const override { return 1; }
};

class EndToEndEnv : public StagewiseBase {
 public:
  using StagewiseBase::StagewiseBase;

  StepResult step(const VirtualParams& action) override {
    require_active();
    if (action.size() != 3)
      throw std::invalid_argument("end-to-end action is (storage, res, diesel)");
    auto rescale = [](double a, double lo, double hi) {
      const double c = std::clamp(a, -1.0, 1.0);
      return lo + 0.5 * (c + 1.0) * (hi - lo);
    };
    const double x0 = rescale(action[0], inst_.storage_min, inst_.storage_max);
    const double x1 = rescale(action[1], 0.0, real_.res[k_]);
    const double x3 = rescale(action[2], inst_.diesel_min, inst_.diesel_max);
    const double x2 = real_.load[k_] + x0 - x1 - x3;  // grid closes the balance

    StepResult sr;
    const double next_charge = charge_ + inst_.efficiency * x0;
    const bool window_violated = next_charge < -1e-9 || next_charge > inst_.capacity + 1e-9;
    const bool grid_violated = x2 < inst_.grid_min - 1e-9;
    Decision z;
    z.values = {x0, x1, x2, x3};
    if (window_violated || grid_violated) {
      z.feasible = false;
      sr.decision = std::move(z);
      sr.cost = kInfeasiblePenalty;  // reward -10000
      sr.done = done_ = true;
      sr.failed = true;
      return sr;
    }
    z.feasible = true;
    sr.decision = std::move(z);
    const double grid_cost =
        x2 >= 0.0 ? inst_.buy_price[k_] * x2 : inst_.sell_price[k_] * x2;
    accumulated_ += grid_cost + inst_.diesel_cost * x3;
    charge_ = next_charge;
    ++k_;
    sr.done = k_ >= inst_.n;
    done_ = sr.done;
    // Cost surfaces only at the end of the horizon.
    sr.cost = sr.done ? accumulated_ : 0.0;
    if (!sr.done) sr.obs = observe();
    return sr;
  }

  Observation reset(std::uint64_t seed) override {
    accumulated_ = 0.0;
    return StagewiseBase::reset(seed);
  }

  int action_dim() const override { return 3; }

 private:
  double accumulated_ = 0.0;
};

class SafetyLayerEnv : public StagewiseBase {
 public:
  using StagewiseBase::StagewiseBase;

  StepResult step(const VirtualParams& action) override {
    require_active();
    if (action.size() != 4)
      throw std::invalid_argument("safety-layer action proposes all four delivered flows");
    const double eta = inst_.efficiency;
    // Delivered convention: storage term positive when discharging.
    std::vector<double> lo = {
        -std::min(inst_.storage_max, (inst_.capacity - charge_) / eta),
        0.0,
        inst_.grid_min,
        inst_.diesel_min,
    };
    std::vector<double> hi = {
        std::min(-inst_.storage_min, charge_ / eta),
        real_.res[k_],
        opt::kInf,
        inst_.diesel_max,
    };
    auto rescale = [](double a, double l, double h) {
      const double c = std::clamp(a, -1.0, 1.0);
      return l + 0.5 * (c + 1.0) * (h - l);
    };
    const double grid_cap = real_.load[k_] + hi[0] + inst_.diesel_max + 1.0;
    std::vector<double> proposal = {
        rescale(action[0], lo[0], hi[0]),
        rescale(action[1], lo[1], hi[1]),
        rescale(action[2], lo[2], grid_cap),
        rescale(action[3], lo[3], hi[3]),
    };
    Decision z = safety_layer_project(proposal, lo, hi, real_.load[k_]);
    const double x0 = -z.values[0];
    const double grid = z.values[2];
    StepResult sr;
    const double grid_cost = grid >= 0.0 ? inst_.buy_price[k_] * grid : inst_.sell_price[k_] * grid;
    sr.cost = grid_cost + inst_.diesel_cost * z.values[3];
    // Report the decision in the storage-flow convention used elsewhere.
    sr.decision.values = {x0, z.values[1], grid, z.values[3]};
    sr.decision.feasible = true;
    charge_ = std::clamp(charge_ + eta * x0, 0.0, inst_.capacity);
    ++k_;
    sr.done = k_ >= inst_.n;
    done_ = sr.done;
    if (!sr.done) sr.obs = observe();
    return sr;
  }

  int action_dim() const override { return 4; }
};

}  // namespace

std::unique_ptr<Environment> make_env(const EmsInstance& instance, EmsVariant variant,
                                      const EmsScales& scales) {
  switch (variant) {
    case EmsVariant::SingleStep: return std::make_unique<SingleStepEnv>(instance, scales);
    case EmsVariant::Sequential: return std::make_unique<SequentialEnv>(instance, scales);
    case EmsVariant::EndToEnd: return std::make_unique<EndToEndEnv>(instance, scales);
  }
  throw std::invalid_argument("unknown ems variant");
}

std::unique_ptr<Environment> make_safety_env(const EmsInstance& instance,
                                             const EmsScales& scales) {
  return std::make_unique<SafetyLayerEnv>(instance, scales);
}

}  // namespace decopt::ems
