#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "learn/a2c.hpp"
#include "policy/policy.hpp"

namespace decopt::learn {

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_episodes = 100;
  int epochs = 100;
  double discount = 1.0;
  std::uint64_t seed = 0;
  double reward_scale = 1.0;  // rewards are -cost / reward_scale
  int eval_every = 10;
  // Wall-clock cap; ignored (epoch count rules) when deterministic is set.
  double budget_seconds = std::numeric_limits<double>::infinity();
  bool deterministic = false;
  bool zero_output_init = true;
};

struct EpochStats {
  int epoch = 0;
  double elapsed_seconds = 0.0;
  double train_mean_cost = 0.0;
  long failed_episodes = 0;
  double eval_mean_cost = std::numeric_limits<double>::quiet_NaN();
};

struct TrainOutcome {
  GaussianPolicy policy;       // final parameters
  GaussianPolicy best_policy;  // best evaluation cost seen (epoch 0 included)
  Mlp critic;
  double best_eval_cost = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  std::vector<EpochStats> history;
  long total_failed_episodes = 0;
  // Episode-stream and action-stream states at the end of training, so a
  // checkpoint can resume the exact random sequence.
  std::vector<std::uint64_t> rng_state;
};

// Builds a fresh Gaussian policy + critic for `env` and trains with A2C.
// Evaluation runs the deterministic mean action on `eval_seeds` (episode
// costs, not scaled rewards); epoch 0 is evaluated before any update so the
// untrained policy is always a checkpoint candidate.
TrainOutcome train_policy(policy::Environment& env, const TrainConfig& config,
                          const std::vector<std::uint64_t>& eval_seeds);

// Single evaluation pass with the deterministic mean action.
double evaluate_mean_policy(policy::Environment& env, const GaussianPolicy& policy,
                            const std::vector<std::uint64_t>& seeds,
                            std::vector<double>* per_episode = nullptr,
                            long* failures = nullptr);

// Exactly the policy train_policy starts from (epoch 0), for untrained
// baselines.
GaussianPolicy initial_policy(const policy::Environment& env, const TrainConfig& config);

// Collects one stochastic episode; returns its (unscaled) cost total.
double collect_episode(policy::Environment& env, const GaussianPolicy& policy, Rng& rng,
                       std::uint64_t seed, double reward_scale, EpisodeSample& out);

}  // namespace decopt::learn
