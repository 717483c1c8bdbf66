#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "common/rng.hpp"

namespace decopt::smc {

struct InfeasibleGeneration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Set multi-cover structure with stochastic integer demands. Rates follow
// the linear law lambda_i = rate_slopes[i] * o for an observable o.
struct SmcInstance {
  int n_elements = 0;
  int n_sets = 0;
  std::vector<std::vector<int>> covers;  // per set: sorted covered elements
  std::vector<double> costs;             // per set, uniform in [1, 100]
  std::vector<double> penalties;         // per element: 10 * max covering cost
  std::vector<double> rate_slopes;       // per element, uniform in [1, 5]

  void validate() const;
  long ones() const;
  std::vector<std::vector<int>> element_sets() const;  // per element: covering sets
  double coverage(const std::vector<double>& x, int element) const;

  void save(const std::string& path) const;
  static SmcInstance load(const std::string& path);
};

using DemandVector = std::vector<long>;

struct ObservedCase {
  double o = 0.0;
  DemandVector demands;
};

using Dataset = std::vector<ObservedCase>;

void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

// Availability matrix generation: every column covers at least one row,
// every row is covered by at least two columns, then random fill until the
// target density is met.
SmcInstance generate_instance(Rng& rng, int n_elements, int n_sets, double density);

DemandVector sample_demands(const SmcInstance& instance, double o, Rng& rng);

}  // namespace decopt::smc
