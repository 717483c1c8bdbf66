#pragma once

#include "ems/dispatch.hpp"
#include "ems/instance.hpp"
#include "opt/mip.hpp"

namespace decopt::ems {

struct TuningOptions {
  int scenarios = 3;
  double gap_tol = 1e-6;
  long node_limit = 2000;
  double time_limit_s = opt::kInf;
  double c0_bound = 0.0;    // 0 = derive from prices
  double mult_bound = 0.0;  // 0 = derive from prices
};

struct TuningResult {
  VirtualCostSchedule schedule;
  double milp_objective = 0.0;  // mean true cost of the MILP solution
  double best_bound = 0.0;
  bool node_limit_hit = false;
  long nodes = 0;
  // Replay diagnostics: simulating the returned schedule through the
  // online heuristic should reproduce the MILP flows.
  bool replay_verified = false;
  double replay_cost = 0.0;
  double max_replay_flow_gap = 0.0;
  double myopic_cost = 0.0;  // all-zero schedule reference on the same scenarios
  std::vector<EmsRealization> scenario_set;
};

// Offline schedule search: embeds the per-stage heuristic's optimality
// conditions (stationarity rows plus complementary-slackness pairs,
// linearized through indicator binaries) into a scenario-averaged MILP
// whose only free model parameters are the virtual storage costs.
// The branch and bound starts from the best constant-schedule replay.
TuningResult tuning_baseline(const EmsInstance& instance, Rng& rng, const TuningOptions& options);

// The MILP behind the baseline, exposed for tests. `strict_margin` is the
// minimum multiplier mass required on every bound-pinned flow; it keeps
// the model away from heuristic indifference points so that its solutions
// stay reproducible by the actual per-stage solver.
opt::MipModel build_tuning_mip(const EmsInstance& instance,
                               const std::vector<EmsRealization>& scenarios, double c0_bound,
                               double mult_bound, double strict_margin);

}  // namespace decopt::ems
