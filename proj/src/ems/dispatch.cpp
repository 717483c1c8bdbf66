#include "ems/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opt/simplex.hpp"

namespace decopt::ems {

using opt::LinearProgram;
using opt::Sense;
using opt::SolveResult;
using opt::SolveStatus;

LinearProgram build_stage_lp(const EmsInstance& instance, double charge, double c0, double res_k,
                             double load_k, int k) {
  if (charge < -1e-9 || charge > instance.capacity + 1e-9)
    throw std::invalid_argument("battery charge outside [0, capacity]");
  charge = std::clamp(charge, 0.0, instance.capacity);
  LinearProgram lp(4);  // [x0, buy, sell, diesel]
  lp.objective = {c0, instance.buy_price[k], -instance.sell_price[k], instance.diesel_cost};
  const double eta = instance.efficiency;
  lp.lower[0] = std::max(instance.storage_min, -charge / eta);
  lp.upper[0] = std::min(instance.storage_max, (instance.capacity - charge) / eta);
  lp.lower[1] = 0.0;
  lp.upper[1] = opt::kInf;
  lp.lower[2] = 0.0;
  lp.upper[2] = -instance.grid_min;
  lp.lower[3] = instance.diesel_min;
  lp.upper[3] = instance.diesel_max;
  // x1 + buy - sell + diesel - x0 = load, with x1 pinned to res_k.
  lp.add_row({-1.0, 1.0, -1.0, 1.0}, Sense::Equal, load_k - res_k);
  return lp;
}

StageDispatch solve_stage(const EmsInstance& instance, double charge, double c0, double res_k,
                          double load_k, int k, SolveResult* raw) {
  const LinearProgram lp = build_stage_lp(instance, charge, c0, res_k, load_k, k);
  SolveResult res = opt::solve_lp(lp);
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error("stage dispatch failed at stage " + std::to_string(k) + ": " +
                             opt::to_string(res.status));
  StageDispatch d;
  d.storage = res.primal[0];
  d.res = res_k;
  d.grid_buy = res.primal[1];
  d.grid_sell = res.primal[2];
  d.diesel = res.primal[3];
  d.charge_after =
      std::clamp(charge + instance.efficiency * d.storage, 0.0, instance.capacity);
  if (raw) *raw = std::move(res);
  return d;
}

double stage_true_cost(const EmsInstance& instance, int k, const StageDispatch& d) {
  return instance.buy_price[k] * d.grid_buy - instance.sell_price[k] * d.grid_sell +
         instance.diesel_cost * d.diesel;
}

DayResult simulate_day(const EmsInstance& instance, const EmsRealization& realization,
                       const VirtualCostSchedule& schedule) {
  instance.validate();
  if (static_cast<int>(schedule.size()) != instance.n)
    throw std::invalid_argument("schedule length must equal the horizon");
  DayResult out;
  double charge = instance.init_charge;
  for (int k = 0; k < instance.n; ++k) {
    StageDispatch d =
        solve_stage(instance, charge, schedule[k], realization.res[k], realization.load[k], k);
    out.true_cost += stage_true_cost(instance, k, d);
    charge = d.charge_after;
    out.stages.push_back(d);
  }
  return out;
}

double clairvoyant_cost(const EmsInstance& instance, const EmsRealization& realization) {
  instance.validate();
  const int n = instance.n;
  // Layout: per stage [x0, buy, sell, diesel], then charge_2 .. charge_{n+1}.
  const int nv = 4 * n + n;
  LinearProgram lp(nv);
  const auto x0 = [&](int k) { return 4 * k; };
  const auto buy = [&](int k) { return 4 * k + 1; };
  const auto sell = [&](int k) { return 4 * k + 2; };
  const auto dsl = [&](int k) { return 4 * k + 3; };
  const auto chg = [&](int k) { return 4 * n + k; };  // charge after stage k

  for (int k = 0; k < n; ++k) {
    lp.objective[buy(k)] = instance.buy_price[k];
    lp.objective[sell(k)] = -instance.sell_price[k];
    lp.objective[dsl(k)] = instance.diesel_cost;
    lp.lower[x0(k)] = instance.storage_min;
    lp.upper[x0(k)] = instance.storage_max;
    lp.lower[buy(k)] = 0.0;
    lp.upper[buy(k)] = opt::kInf;
    lp.lower[sell(k)] = 0.0;
    lp.upper[sell(k)] = -instance.grid_min;
    lp.lower[dsl(k)] = instance.diesel_min;
    lp.upper[dsl(k)] = instance.diesel_max;
    lp.lower[chg(k)] = 0.0;
    lp.upper[chg(k)] = instance.capacity;

    std::vector<double> balance(nv, 0.0);
    balance[x0(k)] = -1.0;
    balance[buy(k)] = 1.0;
    balance[sell(k)] = -1.0;
    balance[dsl(k)] = 1.0;
    lp.add_row(std::move(balance), Sense::Equal, realization.load[k] - realization.res[k]);

    std::vector<double> trans(nv, 0.0);
    trans[chg(k)] = 1.0;
    trans[x0(k)] = -instance.efficiency;
    if (k > 0) trans[chg(k - 1)] = -1.0;
    lp.add_row(std::move(trans), Sense::Equal, k == 0 ? instance.init_charge : 0.0);
  }
  const SolveResult res = opt::solve_lp(lp);
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error(std::string("clairvoyant solve failed: ") +
                             opt::to_string(res.status));
  return res.objective;
}

double dispatch_residual(const EmsInstance& instance, int k, double charge_before,
                         const StageDispatch& d, double load_k) {
  (void)k;
  double r = 0.0;
  const double eta = instance.efficiency;
  r = std::max(r, std::abs(d.res + d.grid() + d.diesel - d.storage - load_k));  // balance
  r = std::max(r, instance.storage_min - d.storage);
  r = std::max(r, d.storage - instance.storage_max);
  r = std::max(r, instance.grid_min - d.grid());
  r = std::max(r, instance.diesel_min - d.diesel);
  r = std::max(r, d.diesel - instance.diesel_max);
  const double next = charge_before + eta * d.storage;
  r = std::max(r, -next);
  r = std::max(r, next - instance.capacity);
  r = std::max(r, std::abs(d.charge_after - next));  // transition bookkeeping
  r = std::max(r, -d.grid_buy);
  r = std::max(r, -d.grid_sell);
  return r;
}

double reachable_min_charge(const EmsInstance& instance) {
  double charge = instance.init_charge;
  for (int k = 0; k < instance.n; ++k) {
    const double flow = std::max(instance.storage_min, -charge / instance.efficiency);
    charge += instance.efficiency * flow;
  }
  return std::max(charge, 0.0);
}

}  // namespace decopt::ems
