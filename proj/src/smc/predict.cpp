#include "smc/predict.hpp"

#include <cmath>

namespace decopt::smc {

std::vector<double> fit_rate_model(const Dataset& data) {
  if (data.size() < 1) throw DegenerateData("empty dataset");
  const std::size_t n = data.front().demands.size();
  double denom = 0.0;
  for (const auto& row : data) denom += row.o * row.o;
  if (denom <= 0.0) throw DegenerateData("observables are all zero");
  std::vector<double> est(n, 0.0);
  for (const auto& row : data) {
    if (row.demands.size() != n) throw DegenerateData("ragged dataset");
    for (std::size_t i = 0; i < n; ++i) est[i] += row.o * static_cast<double>(row.demands[i]);
  }
  for (double& e : est) e /= denom;
  return est;
}

std::vector<double> rate_errors(const std::vector<double>& estimates,
                                const std::vector<double>& truth) {
  if (estimates.size() != truth.size()) throw std::invalid_argument("length mismatch");
  std::vector<double> err(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i)
    err[i] = std::abs(estimates[i] - truth[i]) / std::max(truth[i], 1e-12);
  return err;
}

CoverSolution predict_then_optimize(const SmcInstance& inst, double o,
                                    const std::vector<double>& rate_estimates, PredictMode mode,
                                    int saa_scenarios, Rng& rng, const SolveSettings& settings) {
  if (static_cast<int>(rate_estimates.size()) != inst.n_elements)
    throw std::invalid_argument("rate estimate length mismatch");
  if (mode == PredictMode::Point) {
    DemandVector d(inst.n_elements);
    for (int i = 0; i < inst.n_elements; ++i)
      d[i] = std::max(0L, std::lround(std::floor(rate_estimates[i] * o + 0.5)));
    return solve_deterministic(inst, d, settings);
  }
  if (saa_scenarios < 1) throw std::invalid_argument("need at least one scenario");
  ScenarioSet scenarios;
  for (int s = 0; s < saa_scenarios; ++s) {
    DemandVector d(inst.n_elements);
    for (int i = 0; i < inst.n_elements; ++i)
      d[i] = rng.poisson(std::max(rate_estimates[i], 0.0) * o);
    scenarios.push_back(std::move(d));
  }
  return solve_saa(inst, scenarios, settings);
}

}  // namespace decopt::smc
