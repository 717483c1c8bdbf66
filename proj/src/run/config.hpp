#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common/textio.hpp"

namespace decopt::run {

// Flat experiment configuration. File keys mirror the field names below
// ("ems.stages = 12"); command-line flags override file values.
struct ExperimentConfig {
  std::string experiment = "smc-dfl";
  std::vector<std::string> methods;  // empty = experiment defaults
  std::uint64_t seed = 2024;
  bool deterministic = false;
  double budget_seconds = 45.0;
  std::string checkpoint;           // for `evaluate`
  std::string method;               // for `train` / `baseline` / `evaluate`

  // Energy management domain.
  int ems_stages = 12;
  int ems_scenarios = 3;
  int ems_eval_instances = 30;
  long tuning_node_limit = 800;
  int ems_epochs_single = 600;
  int ems_epochs_sequential = 200;
  int ems_epochs_rl = 260;
  int ems_epochs_safety = 120;
  int ems_batch = 40;
  double ems_reward_scale = 1000.0;

  // Set multi-cover domain.
  int smc_elements = 20;
  int smc_sets = 100;
  double smc_density = 0.08;
  int smc_sto_elements = 6;
  int smc_sto_sets = 25;
  double smc_sto_density = 0.25;
  int smc_train_pairs = 500;
  int smc_test_instances = 30;
  int smc_epochs = 600;
  int smc_batch = 100;
  std::vector<int> scenario_grid = {1, 5, 10, 50};
  int saa_replicates = 3;
  double smc_gap_tol = 1e-6;

  // Learner.
  double learning_rate = 0.01;
  int eval_every = 10;

  static ExperimentConfig from_doc(const KvDoc& doc);
  KvDoc to_doc() const;
  void apply_override(const std::string& key, const std::string& value);
};

}  // namespace decopt::run
