#pragma once

#include "ems/instance.hpp"
#include "opt/model.hpp"

namespace decopt::ems {

// Executed flows for one stage plus the resulting battery charge.
struct StageDispatch {
  double storage = 0.0;  // x0, positive charges
  double res = 0.0;      // x1, realized renewable production
  double grid_buy = 0.0;
  double grid_sell = 0.0;
  double diesel = 0.0;
  double charge_after = 0.0;

  double grid() const { return grid_buy - grid_sell; }
};

struct DayResult {
  std::vector<StageDispatch> stages;
  double true_cost = 0.0;  // excludes the virtual storage term
};

// One-stage dispatch LP. Variables: [x0, buy, sell, diesel]; the realized
// renewable production enters the balance as a constant. The battery
// window is folded into the storage bounds.
opt::LinearProgram build_stage_lp(const EmsInstance& instance, double charge, double c0,
                                  double res_k, double load_k, int k);

// Solves the stage LP and unpacks the dispatch.
StageDispatch solve_stage(const EmsInstance& instance, double charge, double c0, double res_k,
                          double load_k, int k, opt::SolveResult* raw = nullptr);

// Threads the battery charge through n myopic stage solves. The reported
// cost uses real prices only.
DayResult simulate_day(const EmsInstance& instance, const EmsRealization& realization,
                       const VirtualCostSchedule& schedule);

// Perfect-information optimum over the whole day (lower bound for any
// online policy on the same realization).
double clairvoyant_cost(const EmsInstance& instance, const EmsRealization& realization);

double stage_true_cost(const EmsInstance& instance, int k, const StageDispatch& d);

// Max violation across balance, bounds, battery window and transition.
double dispatch_residual(const EmsInstance& instance, int k, double charge_before,
                         const StageDispatch& d, double load_k);

// Battery charge after greedily discharging at the maximum rate all day
// (the floor reachable from the initial charge).
double reachable_min_charge(const EmsInstance& instance);

}  // namespace decopt::ems
