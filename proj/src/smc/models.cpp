#include "smc/models.hpp"

#include <algorithm>
#include <cmath>

namespace decopt::smc {

using opt::kInf;
using opt::LinearProgram;
using opt::MipModel;
using opt::MipOptions;
using opt::Row;
using opt::Sense;
using opt::SolveResult;
using opt::SolveStatus;

MipModel build_deterministic_mip(const SmcInstance& inst, const DemandVector& demands) {
  inst.validate();
  if (static_cast<int>(demands.size()) != inst.n_elements)
    throw std::invalid_argument("demand vector length mismatch");
  MipModel mip(inst.n_sets);
  for (int j = 0; j < inst.n_sets; ++j) {
    mip.base.objective[j] = inst.costs[j];
    mip.base.lower[j] = 0.0;
    mip.base.upper[j] = kInf;
    mip.set_integer(j);
  }
  const auto rows = inst.element_sets();
  for (int i = 0; i < inst.n_elements; ++i) {
    std::vector<double> coeffs(inst.n_sets, 0.0);
    for (int j : rows[i]) coeffs[j] = 1.0;
    mip.base.add_row(std::move(coeffs), Sense::GreaterEqual, static_cast<double>(demands[i]));
  }
  return mip;
}

MipModel build_saa_mip(const SmcInstance& inst, const ScenarioSet& scenarios) {
  inst.validate();
  if (scenarios.empty()) throw std::invalid_argument("scenario set is empty");
  const int J = inst.n_sets, I = inst.n_elements;
  const int S = static_cast<int>(scenarios.size());
  const int nv = J + 2 * I * S;
  const auto z_of = [&](int w, int i) { return J + 2 * I * w + i; };
  const auto s_of = [&](int w, int i) { return J + 2 * I * w + I + i; };

  MipModel mip(nv);
  for (int j = 0; j < J; ++j) {
    mip.base.objective[j] = inst.costs[j];
    mip.base.lower[j] = 0.0;
    mip.base.upper[j] = kInf;
    mip.set_integer(j);
  }
  const double inv_s = 1.0 / S;
  for (int w = 0; w < S; ++w) {
    if (static_cast<int>(scenarios[w].size()) != I)
      throw std::invalid_argument("scenario length mismatch");
    for (int i = 0; i < I; ++i) {
      mip.base.lower[z_of(w, i)] = 0.0;
      mip.base.upper[z_of(w, i)] = 1.0;
      mip.set_integer(z_of(w, i));
      mip.base.lower[s_of(w, i)] = 0.0;
      mip.base.upper[s_of(w, i)] = kInf;
      mip.base.objective[s_of(w, i)] = inv_s * inst.penalties[i];
    }
  }
  const auto rows = inst.element_sets();
  for (int w = 0; w < S; ++w) {
    for (int i = 0; i < I; ++i) {
      const double d = static_cast<double>(scenarios[w][i]);
      // Coverage may be switched off by z: a'x + d*z >= d.
      std::vector<double> cover(nv, 0.0);
      for (int j : rows[i]) cover[j] = 1.0;
      cover[z_of(w, i)] = d;
      mip.base.add_row(std::move(cover), Sense::GreaterEqual, d);
      // z = 1 -> slack tracks the shortfall: s + a'x >= d.
      Row implied;
      implied.coeffs.assign(nv, 0.0);
      for (int j : rows[i]) implied.coeffs[j] = 1.0;
      implied.coeffs[s_of(w, i)] = 1.0;
      implied.sense = Sense::GreaterEqual;
      implied.rhs = d;
      // The implication also holds unconditionally (z = 0 forces full
      // coverage), so the same row is added outright; it tightens the
      // relaxation enough that the tree stays small.
      mip.base.rows.push_back(implied);
      mip.add_indicator(z_of(w, i), 1, std::move(implied));
    }
  }
  return mip;
}

double recourse_cost(const SmcInstance& inst, const std::vector<double>& x,
                     const DemandVector& realized) {
  if (static_cast<int>(x.size()) < inst.n_sets)
    throw std::invalid_argument("solution vector too short");
  double cost = 0.0;
  for (int j = 0; j < inst.n_sets; ++j) cost += inst.costs[j] * x[j];
  std::vector<double> covered(inst.n_elements, 0.0);
  for (int j = 0; j < inst.n_sets; ++j)
    for (int i : inst.covers[j]) covered[i] += x[j];
  for (int i = 0; i < inst.n_elements; ++i)
    cost += inst.penalties[i] * std::max(0.0, static_cast<double>(realized[i]) - covered[i]);
  return cost;
}

std::vector<double> greedy_cover(const SmcInstance& inst, const DemandVector& demands) {
  std::vector<double> x(inst.n_sets, 0.0);
  std::vector<double> covered(inst.n_elements, 0.0);
  const auto rows = inst.element_sets();
  for (int i = 0; i < inst.n_elements; ++i) {
    double deficit = static_cast<double>(demands[i]) - covered[i];
    if (deficit <= 0.0) continue;
    int cheapest = rows[i][0];
    for (int j : rows[i])
      if (inst.costs[j] < inst.costs[cheapest]) cheapest = j;
    const double units = std::ceil(deficit);
    x[cheapest] += units;
    for (int e : inst.covers[cheapest]) covered[e] += units;
  }
  return x;
}

namespace {

CoverSolution run_mip(const MipModel& mip, const std::vector<double>& incumbent,
                      const SolveSettings& settings, int keep_vars) {
  MipOptions opt;
  opt.gap_tol = settings.gap_tol;
  opt.node_limit = settings.node_limit;
  opt.initial_incumbent = &incumbent;
  const SolveResult res = opt::solve_mip(mip, opt);
  if (res.status != SolveStatus::Optimal)
    throw std::runtime_error(std::string("cover solve failed: ") + opt::to_string(res.status));
  CoverSolution out;
  out.x.assign(res.primal.begin(), res.primal.begin() + keep_vars);
  for (double& v : out.x) v = std::round(v);
  out.objective = res.objective;
  out.node_limit_hit = res.node_limit_hit;
  out.nodes = res.nodes;
  return out;
}

}  // namespace

CoverSolution solve_deterministic(const SmcInstance& inst, const DemandVector& demands,
                                  const SolveSettings& settings) {
  const MipModel mip = build_deterministic_mip(inst, demands);
  const std::vector<double> greedy = greedy_cover(inst, demands);
  return run_mip(mip, greedy, settings, inst.n_sets);
}

CoverSolution solve_saa(const SmcInstance& inst, const ScenarioSet& scenarios,
                        const SolveSettings& settings) {
  const MipModel mip = build_saa_mip(inst, scenarios);
  // Seed: greedy cover of the scenario-wise maximum demand (zero slack).
  DemandVector peak(inst.n_elements, 0);
  for (const auto& sc : scenarios)
    for (int i = 0; i < inst.n_elements; ++i) peak[i] = std::max(peak[i], sc[i]);
  const std::vector<double> greedy = greedy_cover(inst, peak);
  std::vector<double> incumbent(mip.base.num_vars, 0.0);
  for (int j = 0; j < inst.n_sets; ++j) incumbent[j] = greedy[j];
  // z = 0 and s = 0 everywhere: the peak cover satisfies every scenario.
  return run_mip(mip, incumbent, settings, inst.n_sets);
}

double posterior_optimal(const SmcInstance& inst, const DemandVector& realized,
                         const SolveSettings& settings) {
  return solve_deterministic(inst, realized, settings).objective;
}

}  // namespace decopt::smc
