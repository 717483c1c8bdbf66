#pragma once

#include "opt/mip.hpp"
#include "smc/instance.hpp"

namespace decopt::smc {

using ScenarioSet = std::vector<DemandVector>;

// min c'x  s.t.  sum_{j covering i} x_j >= d_i, x integer >= 0.
opt::MipModel build_deterministic_mip(const SmcInstance& instance, const DemandVector& demands);

// Scenario-averaged model with relaxed coverage: coverage rows
// a'x >= d(1-z), indicators z=1 -> s >= d - a'x, objective
// c'x + (1/|S|) sum w_i s. x and z integral, s continuous.
// Variable layout: x[0..J-1], then per scenario w: z[w][i], s[w][i].
opt::MipModel build_saa_mip(const SmcInstance& instance, const ScenarioSet& scenarios);

// Production cost plus penalties on unmet realized demand.
double recourse_cost(const SmcInstance& instance, const std::vector<double>& x,
                     const DemandVector& realized);

struct SolveSettings {
  double gap_tol = 1e-9;
  long node_limit = 200000;
};

struct CoverSolution {
  std::vector<double> x;  // production counts (integral values)
  double objective = 0.0;
  bool node_limit_hit = false;
  long nodes = 0;
};

// Solves the deterministic model, seeding branch and bound with a greedy
// cover so a feasible point always exists early.
CoverSolution solve_deterministic(const SmcInstance& instance, const DemandVector& demands,
                                  const SolveSettings& settings = {});

CoverSolution solve_saa(const SmcInstance& instance, const ScenarioSet& scenarios,
                        const SolveSettings& settings = {});

// Optimal hindsight cost on realized demands (the gap denominator).
double posterior_optimal(const SmcInstance& instance, const DemandVector& realized,
                         const SolveSettings& settings = {});

// Cheapest-covering-set greedy; always feasible for the given demands.
std::vector<double> greedy_cover(const SmcInstance& instance, const DemandVector& demands);

}  // namespace decopt::smc
