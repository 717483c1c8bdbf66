#pragma once

#include <stdexcept>
#include <vector>

#include "learn/adam.hpp"
#include "learn/gaussian.hpp"

namespace decopt::learn {

struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepSample {
  std::vector<double> obs;     // normalized observation fed to the nets
  std::vector<double> action;  // sampled virtual parameters
  double reward = 0.0;         // negative (scaled) stage cost
};

struct EpisodeSample {
  std::vector<StepSample> steps;
  bool failed = false;
};

struct A2cConfig {
  double learning_rate = 0.01;
  double gamma = 1.0;
  bool normalize_advantages = true;
};

struct A2cDiagnostics {
  double mean_return = 0.0;
  double advantage_std = 0.0;
  double policy_grad_norm = 0.0;
  double critic_loss = 0.0;
};

// One advantage-actor-critic update over a batch of episodes:
// reward-to-go targets, critic baseline, batch-normalized advantages,
// a single Adam step for each network.
A2cDiagnostics a2c_update(GaussianPolicy& policy, Mlp& critic,
                          const std::vector<EpisodeSample>& batch, const A2cConfig& config,
                          AdamState& policy_state, AdamState& log_std_state,
                          AdamState& critic_state);

}  // namespace decopt::learn
