#pragma once

#include <string>
#include <vector>

#include "common/rng.hpp"

namespace decopt::ems {

// One day of the microgrid dispatch problem.
//
// Flow conventions used throughout this module:
//   x0  storage flow, positive charges the battery: charge' = charge + eta*x0
//   x1  renewable production, pinned to the realized value
//   x2  grid exchange (buy positive, sell negative), no upper bound
//   x3  diesel generator
// Power balance at each stage: x1 + x2 + x3 - x0 = load.
struct EmsInstance {
  int n = 0;                         // stages per day
  std::vector<double> res_forecast;  // kW per stage
  std::vector<double> load_forecast;
  std::vector<double> buy_price;     // currency per kW-stage
  std::vector<double> sell_price;
  double diesel_cost = 0.0;

  double storage_min = 0.0;  // physical bounds on x0 (min < 0 allows discharge)
  double storage_max = 0.0;
  double grid_min = 0.0;     // export capacity (negative); buying is unbounded
  double diesel_min = 0.0;
  double diesel_max = 0.0;

  double capacity = 0.0;     // battery capacity
  double efficiency = 1.0;   // in (0, 1]
  double init_charge = 0.0;

  void validate() const;
  void save(const std::string& path) const;
  static EmsInstance load(const std::string& path);
};

// Realized renewable production and load: forecast plus truncated normal
// noise whose 95% band is +-10% of the forecast.
struct EmsRealization {
  std::vector<double> res;
  std::vector<double> load;

  void save(const std::string& path) const;
  static EmsRealization load_file(const std::string& path);
};

using VirtualCostSchedule = std::vector<double>;

void save_schedule(const VirtualCostSchedule& schedule, const std::string& path);
VirtualCostSchedule load_schedule(const std::string& path);

// Synthetic day: sinusoidal load, daylight renewable bump, off-peak/peak
// prices with sell strictly below buy.
EmsInstance generate_ems_instance(Rng& rng, int n);

EmsRealization sample_realization(const EmsInstance& instance, Rng& rng);

}  // namespace decopt::ems
