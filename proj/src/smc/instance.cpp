#include "smc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "common/textio.hpp"

namespace decopt::smc {

void SmcInstance::validate() const {
  if (n_elements < 1 || n_sets < 1) throw std::invalid_argument("empty instance");
  if (static_cast<int>(covers.size()) != n_sets) throw std::invalid_argument("covers size");
  if (static_cast<int>(costs.size()) != n_sets) throw std::invalid_argument("costs size");
  if (static_cast<int>(penalties.size()) != n_elements)
    throw std::invalid_argument("penalties size");
  if (static_cast<int>(rate_slopes.size()) != n_elements)
    throw std::invalid_argument("rate_slopes size");
  std::vector<int> row_count(n_elements, 0);
  for (int j = 0; j < n_sets; ++j) {
    if (covers[j].empty()) throw std::invalid_argument("column covers nothing");
    for (int i : covers[j]) {
      if (i < 0 || i >= n_elements) throw std::invalid_argument("row index out of range");
      ++row_count[i];
    }
  }
  for (int i = 0; i < n_elements; ++i)
    if (row_count[i] < 2) throw std::invalid_argument("row covered by fewer than two columns");
}

long SmcInstance::ones() const {
  long total = 0;
  for (const auto& c : covers) total += static_cast<long>(c.size());
  return total;
}

std::vector<std::vector<int>> SmcInstance::element_sets() const {
  std::vector<std::vector<int>> rows(n_elements);
  for (int j = 0; j < n_sets; ++j)
    for (int i : covers[j]) rows[i].push_back(j);
  return rows;
}

double SmcInstance::coverage(const std::vector<double>& x, int element) const {
  double acc = 0.0;
  for (int j = 0; j < n_sets; ++j)
    if (std::binary_search(covers[j].begin(), covers[j].end(), element)) acc += x[j];
  return acc;
}

void SmcInstance::save(const std::string& path) const {
  KvDoc doc;
  doc.set("type", "smc-instance");
  doc.set_int("n_elements", n_elements);
  doc.set_int("n_sets", n_sets);
  std::string triplets;
  for (int j = 0; j < n_sets; ++j)
    for (int i : covers[j]) {
      if (!triplets.empty()) triplets += " ";
      triplets += std::to_string(i) + ":" + std::to_string(j);
    }
  doc.set("ones_row_col", triplets);
  doc.set_array("costs", costs);
  doc.set_array("penalties", penalties);
  doc.set_array("rate_slopes", rate_slopes);
  doc.save(path);
}

SmcInstance SmcInstance::load(const std::string& path) {
  const KvDoc doc = KvDoc::load(path);
  if (doc.get("type", "") != "smc-instance") throw IoError("not an smc instance file: " + path);
  SmcInstance inst;
  inst.n_elements = static_cast<int>(doc.get_int("n_elements"));
  inst.n_sets = static_cast<int>(doc.get_int("n_sets"));
  inst.covers.assign(inst.n_sets, {});
  std::stringstream ss(doc.get("ones_row_col"));
  std::string item;
  while (ss >> item) {
    const auto colon = item.find(':');
    const int i = std::stoi(item.substr(0, colon));
    const int j = std::stoi(item.substr(colon + 1));
    inst.covers.at(j).push_back(i);
  }
  for (auto& c : inst.covers) std::sort(c.begin(), c.end());
  inst.costs = doc.get_array("costs");
  inst.penalties = doc.get_array("penalties");
  inst.rate_slopes = doc.get_array("rate_slopes");
  inst.validate();
  return inst;
}

void save_dataset(const Dataset& data, const std::string& path) {
  std::string text = "# smc-dataset: o, then one demand per element\n";
  for (const auto& row : data) {
    text += format_double(row.o);
    for (long d : row.demands) text += "," + std::to_string(d);
    text += "\n";
  }
  write_text_file(path, text);
}

Dataset load_dataset(const std::string& path) {
  const std::string text = read_text_file(path);
  Dataset out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    ObservedCase row;
    std::stringstream ls(line);
    std::string cell;
    bool first = true;
    while (std::getline(ls, cell, ',')) {
      if (first) {
        row.o = parse_double(cell);
        first = false;
      } else {
        row.demands.push_back(std::stol(cell));
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

SmcInstance generate_instance(Rng& rng, int n_elements, int n_sets, double density) {
  const long target = std::lround(density * n_elements * n_sets);
  if (target < 2L * n_elements + n_sets)
    throw InfeasibleGeneration("density too low for the coverage rules");

  SmcInstance inst;
  inst.n_elements = n_elements;
  inst.n_sets = n_sets;
  std::vector<std::set<int>> cols(n_sets);
  std::vector<int> row_count(n_elements, 0);
  long ones = 0;

  // Every column covers at least one row.
  for (int j = 0; j < n_sets; ++j) {
    const int i = static_cast<int>(rng.uniform_int(0, n_elements - 1));
    cols[j].insert(i);
    ++row_count[i];
    ++ones;
  }
  // Every row covered by at least two columns.
  for (int i = 0; i < n_elements; ++i) {
    int guard = 0;
    while (row_count[i] < 2 && guard++ < 100000) {
      const int j = static_cast<int>(rng.uniform_int(0, n_sets - 1));
      if (cols[j].insert(i).second) {
        ++row_count[i];
        ++ones;
      }
    }
    if (row_count[i] < 2) throw InfeasibleGeneration("could not satisfy the two-cover rule");
  }
  // Random fill to the target density.
  long guard = 0;
  while (ones < target && guard++ < 1000000) {
    const int i = static_cast<int>(rng.uniform_int(0, n_elements - 1));
    const int j = static_cast<int>(rng.uniform_int(0, n_sets - 1));
    if (cols[j].insert(i).second) {
      ++row_count[i];
      ++ones;
    }
  }

  inst.covers.resize(n_sets);
  for (int j = 0; j < n_sets; ++j) inst.covers[j].assign(cols[j].begin(), cols[j].end());
  inst.costs.resize(n_sets);
  for (int j = 0; j < n_sets; ++j) inst.costs[j] = rng.uniform(1.0, 100.0);
  inst.rate_slopes.resize(n_elements);
  for (int i = 0; i < n_elements; ++i) inst.rate_slopes[i] = rng.uniform(1.0, 5.0);
  inst.penalties.assign(n_elements, 0.0);
  for (int j = 0; j < n_sets; ++j)
    for (int i : inst.covers[j]) inst.penalties[i] = std::max(inst.penalties[i], inst.costs[j]);
  for (double& w : inst.penalties) w *= 10.0;
  inst.validate();
  return inst;
}

DemandVector sample_demands(const SmcInstance& instance, double o, Rng& rng) {
  if (!(o > 0.0)) throw std::invalid_argument("observable must be positive");
  DemandVector d(instance.n_elements);
  for (int i = 0; i < instance.n_elements; ++i)
    d[i] = rng.poisson(instance.rate_slopes[i] * o);
  return d;
}

}  // namespace decopt::smc
