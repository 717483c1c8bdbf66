#include "ems/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common/textio.hpp"

namespace decopt::ems {

void EmsInstance::validate() const {
  if (n < 1) throw std::invalid_argument("instance needs at least one stage");
  const auto sz = static_cast<std::size_t>(n);
  if (res_forecast.size() != sz || load_forecast.size() != sz || buy_price.size() != sz ||
      sell_price.size() != sz)
    throw std::invalid_argument("per-stage arrays must have length n");
  for (int k = 0; k < n; ++k) {
    if (res_forecast[k] < 0.0 || load_forecast[k] < 0.0)
      throw std::invalid_argument("forecasts must be nonnegative");
    if (buy_price[k] < sell_price[k])
      throw std::invalid_argument("buy price must be at least the sell price");
  }
  if (!(capacity >= 0.0) || init_charge < 0.0 || init_charge > capacity)
    throw std::invalid_argument("initial charge outside [0, capacity]");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  if (storage_min > 0.0 || storage_max < 0.0)
    throw std::invalid_argument("storage bounds must straddle zero");
  if (grid_min > 0.0) throw std::invalid_argument("grid lower bound must allow buying");
  if (diesel_min < 0.0 || diesel_max < diesel_min)
    throw std::invalid_argument("diesel bounds must be nonnegative and ordered");
}

void EmsInstance::save(const std::string& path) const {
  KvDoc doc;
  doc.set("type", "ems-instance");
  doc.set_int("stages", n);
  doc.set_array("res_forecast_kw", res_forecast);
  doc.set_array("load_forecast_kw", load_forecast);
  doc.set_array("buy_price_per_kw_stage", buy_price);
  doc.set_array("sell_price_per_kw_stage", sell_price);
  doc.set_num("diesel_cost_per_kw_stage", diesel_cost);
  doc.set_num("storage_min_kw", storage_min);
  doc.set_num("storage_max_kw", storage_max);
  doc.set_num("grid_min_kw", grid_min);
  doc.set_num("diesel_min_kw", diesel_min);
  doc.set_num("diesel_max_kw", diesel_max);
  doc.set_num("capacity_kwh", capacity);
  doc.set_num("efficiency", efficiency);
  doc.set_num("init_charge_kwh", init_charge);
  doc.save(path);
}

EmsInstance EmsInstance::load(const std::string& path) {
  const KvDoc doc = KvDoc::load(path);
  if (doc.get("type", "") != "ems-instance") throw IoError("not an ems instance file: " + path);
  EmsInstance inst;
  inst.n = static_cast<int>(doc.get_int("stages"));
  inst.res_forecast = doc.get_array("res_forecast_kw");
  inst.load_forecast = doc.get_array("load_forecast_kw");
  inst.buy_price = doc.get_array("buy_price_per_kw_stage");
  inst.sell_price = doc.get_array("sell_price_per_kw_stage");
  inst.diesel_cost = doc.get_num("diesel_cost_per_kw_stage");
  inst.storage_min = doc.get_num("storage_min_kw");
  inst.storage_max = doc.get_num("storage_max_kw");
  inst.grid_min = doc.get_num("grid_min_kw");
  inst.diesel_min = doc.get_num("diesel_min_kw");
  inst.diesel_max = doc.get_num("diesel_max_kw");
  inst.capacity = doc.get_num("capacity_kwh");
  inst.efficiency = doc.get_num("efficiency");
  inst.init_charge = doc.get_num("init_charge_kwh");
  inst.validate();
  return inst;
}

void EmsRealization::save(const std::string& path) const {
  KvDoc doc;
  doc.set("type", "ems-realization");
  doc.set_array("res_kw", res);
  doc.set_array("load_kw", load);
  doc.save(path);
}

EmsRealization EmsRealization::load_file(const std::string& path) {
  const KvDoc doc = KvDoc::load(path);
  if (doc.get("type", "") != "ems-realization")
    throw IoError("not an ems realization file: " + path);
  EmsRealization r;
  r.res = doc.get_array("res_kw");
  r.load = doc.get_array("load_kw");
  return r;
}

void save_schedule(const VirtualCostSchedule& schedule, const std::string& path) {
  std::string text;
  for (double v : schedule) text += format_double(v) + "\n";
  write_text_file(path, text);
}

VirtualCostSchedule load_schedule(const std::string& path) {
  const std::string text = read_text_file(path);
  VirtualCostSchedule out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    if (!line.empty()) out.push_back(parse_double(line));
    pos = nl + 1;
  }
  return out;
}

EmsInstance generate_ems_instance(Rng& rng, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  EmsInstance inst;
  inst.n = n;
  const double base_load = rng.uniform(5.0, 7.0);
  const double res_peak = rng.uniform(1.0, 1.6) * base_load;
  inst.res_forecast.resize(n);
  inst.load_forecast.resize(n);
  inst.buy_price.resize(n);
  inst.sell_price.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = (k + 0.5) / n;  // fraction of the day
    const double load =
        base_load * (1.0 + 0.35 * std::sin(2.0 * M_PI * (t - 0.30))) * rng.uniform(0.97, 1.03);
    inst.load_forecast[k] = std::max(load, 0.2 * base_load);
    // Daylight bump between 25% and 75% of the horizon.
    const double day = std::sin(M_PI * std::clamp((t - 0.25) / 0.5, 0.0, 1.0));
    inst.res_forecast[k] = std::max(0.0, res_peak * day * rng.uniform(0.9, 1.1));
    const bool peak = t > 0.45 && t < 0.95;
    const double buy = (peak ? 24.0 : 9.0) * rng.uniform(0.95, 1.05);
    inst.buy_price[k] = buy;
    inst.sell_price[k] = buy * rng.uniform(0.45, 0.60);
  }
  inst.diesel_cost = rng.uniform(14.0, 17.0) + 0.137;  // strictly between the price tiers
  inst.capacity = rng.uniform(8.0, 12.0);
  inst.efficiency = rng.uniform(0.85, 0.95);
  inst.init_charge = 0.5 * inst.capacity;
  inst.storage_max = inst.capacity / 2.5;
  inst.storage_min = -inst.storage_max;
  double max_res = 0.0;
  for (double r : inst.res_forecast) max_res = std::max(max_res, r);
  inst.grid_min = -(1.5 * max_res + inst.storage_max + base_load);
  inst.diesel_min = 0.0;
  inst.diesel_max = rng.uniform(2.0, 4.0);
  inst.validate();
  return inst;
}

EmsRealization sample_realization(const EmsInstance& instance, Rng& rng) {
  EmsRealization r;
  r.res.resize(instance.n);
  r.load.resize(instance.n);
  for (int k = 0; k < instance.n; ++k) {
    const double sr = 0.10 * instance.res_forecast[k] / 1.96;
    const double sl = 0.10 * instance.load_forecast[k] / 1.96;
    r.res[k] = std::max(0.0, instance.res_forecast[k] + sr * rng.normal());
    r.load[k] = std::max(0.0, instance.load_forecast[k] + sl * rng.normal());
  }
  return r;
}

}  // namespace decopt::ems
