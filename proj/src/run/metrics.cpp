#include "run/metrics.hpp"

#include <sstream>

#include "common/textio.hpp"

namespace decopt::run {

double optimality_gap(double cost, double oracle_cost) {
  if (!(oracle_cost > 0.0)) throw ZeroOracle("oracle cost must be strictly positive");
  return (cost - oracle_cost) / oracle_cost;
}

GapStats mean_std(const std::vector<double>& values) {
  GapStats s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(acc / static_cast<double>(values.size()));
  return s;
}

namespace {

std::string cell(double v) { return std::isnan(v) ? "" : format_double(v); }
std::string cell(long v) { return v < 0 ? "" : std::to_string(v); }
std::string cell(int v) { return v < 0 ? "" : std::to_string(v); }

double num_or_nan(const std::string& s) {
  return s.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(s);
}

}  // namespace

std::string records_to_csv(const std::vector<MetricsRecord>& records) {
  std::string out =
      "experiment,method,epoch,scenarios,cost_mean,cost_std,gap_mean,gap_std,"
      "failed_episodes,mape_mean\n";
  for (const auto& r : records) {
    out += r.experiment + "," + r.method + "," + cell(r.epoch) + "," + cell(r.scenarios) + "," +
           cell(r.cost_mean) + "," + cell(r.cost_std) + "," + cell(r.gap_mean) + "," +
           cell(r.gap_std) + "," + cell(r.failed_episodes) + "," + cell(r.mape_mean) + "\n";
  }
  return out;
}

std::vector<MetricsRecord> records_from_csv(const std::string& text) {
  std::vector<MetricsRecord> out;
  std::stringstream ss(text);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    cells.resize(10);
    MetricsRecord r;
    r.experiment = cells[0];
    r.method = cells[1];
    r.epoch = cells[2].empty() ? -1 : std::stoi(cells[2]);
    r.scenarios = cells[3].empty() ? -1 : std::stoi(cells[3]);
    r.cost_mean = num_or_nan(cells[4]);
    r.cost_std = num_or_nan(cells[5]);
    r.gap_mean = num_or_nan(cells[6]);
    r.gap_std = num_or_nan(cells[7]);
    r.failed_episodes = cells[8].empty() ? -1 : std::stol(cells[8]);
    r.mape_mean = num_or_nan(cells[9]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string timings_to_csv(const std::vector<TimingRecord>& records) {
  std::string out = "experiment,method,phase,seconds\n";
  for (const auto& r : records)
    out += r.experiment + "," + r.method + "," + r.phase + "," + format_double(r.seconds) + "\n";
  return out;
}

std::vector<double> trailing_mean(const std::vector<double>& series, int window) {
  std::vector<double> out(series.size(), 0.0);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t start = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - window : 0;
    double acc = 0.0;
    for (std::size_t k = start; k <= i; ++k) acc += series[k];
    out[i] = acc / static_cast<double>(i - start + 1);
  }
  return out;
}

}  // namespace decopt::run
