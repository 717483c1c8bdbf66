#pragma once

#include "run/config.hpp"
#include "run/metrics.hpp"

namespace decopt::run {

struct ExperimentOutput {
  std::vector<MetricsRecord> records;
  std::vector<TimingRecord> timings;
};

// The four evaluation pipelines. Result rows are deterministic under a
// fixed seed; wall-clock measurements go to `timings`.
ExperimentOutput run_ems_tuning(const ExperimentConfig& config);
ExperimentOutput run_ems_constraints(const ExperimentConfig& config);
ExperimentOutput run_smc_dfl(const ExperimentConfig& config);
ExperimentOutput run_smc_stochastic(const ExperimentConfig& config);

ExperimentOutput run_experiment(const ExperimentConfig& config);

// Writes records.csv, timings.csv, manifest.txt and the per-experiment
// figure CSVs into out_dir.
void emit_report(const ExperimentOutput& output, const ExperimentConfig& config,
                 const std::string& out_dir);

// Rebuilds the figure CSVs from a previously written records.csv.
void emit_figures_from_records(const std::vector<MetricsRecord>& records,
                               const std::string& out_dir);

}  // namespace decopt::run
