#pragma once

#include "smc/models.hpp"

namespace decopt::smc {

struct DegenerateData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Per-element least squares through the origin: a_i = sum(o*d_i) / sum(o^2).
std::vector<double> fit_rate_model(const Dataset& data);

// Relative rate errors against the generating slopes (the plotted MAPE).
std::vector<double> rate_errors(const std::vector<double>& estimates,
                                const std::vector<double>& truth);

enum class PredictMode { Point, Saa };

// Predict-then-optimize: plug predicted rates into the downstream model,
// either as rounded point demands or through sampled scenarios.
CoverSolution predict_then_optimize(const SmcInstance& instance, double o,
                                    const std::vector<double>& rate_estimates, PredictMode mode,
                                    int saa_scenarios, Rng& rng,
                                    const SolveSettings& settings = {});

}  // namespace decopt::smc
