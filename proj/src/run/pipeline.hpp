#pragma once

#include "run/config.hpp"

namespace decopt::run {

// Backing implementations for the command-line verbs. All of them derive
// their inputs from the config (and its seed) and write files under
// out_dir; they throw on error.
void pipeline_generate(const ExperimentConfig& config, const std::string& out_dir);
void pipeline_train(const ExperimentConfig& config, const std::string& out_dir);
void pipeline_evaluate(const ExperimentConfig& config, const std::string& out_dir);
void pipeline_baseline(const ExperimentConfig& config, const std::string& out_dir);
void pipeline_experiment(const ExperimentConfig& config, const std::string& out_dir);
void pipeline_report(const ExperimentConfig& config, const std::string& records_dir,
                     const std::string& out_dir);

}  // namespace decopt::run
