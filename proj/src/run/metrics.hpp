#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace decopt::run {

struct ZeroOracle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (cost - oracle) / oracle.
double optimality_gap(double cost, double oracle_cost);

struct GapStats {
  double mean = 0.0;
  double stddev = 0.0;
};

GapStats mean_std(const std::vector<double>& values);

// One emitted measurement. Unused numeric fields stay NaN / -1 and are
// written as empty CSV cells. Wall-clock goes to a separate timings file
// so the result CSVs stay bit-reproducible.
struct MetricsRecord {
  std::string experiment;
  std::string method;
  int epoch = -1;
  int scenarios = -1;
  double cost_mean = std::numeric_limits<double>::quiet_NaN();
  double cost_std = std::numeric_limits<double>::quiet_NaN();
  double gap_mean = std::numeric_limits<double>::quiet_NaN();
  double gap_std = std::numeric_limits<double>::quiet_NaN();
  long failed_episodes = -1;
  double mape_mean = std::numeric_limits<double>::quiet_NaN();
};

struct TimingRecord {
  std::string experiment;
  std::string method;
  std::string phase;
  double seconds = 0.0;
};

std::string records_to_csv(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> records_from_csv(const std::string& text);
std::string timings_to_csv(const std::vector<TimingRecord>& records);

// Smoothed (trailing-window mean) view of a series, used by trend checks.
std::vector<double> trailing_mean(const std::vector<double>& series, int window);

}  // namespace decopt::run
