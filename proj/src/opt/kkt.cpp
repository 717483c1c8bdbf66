#include "opt/kkt.hpp"

#include <algorithm>
#include <cmath>

namespace decopt::opt {

Duals extract_duals(const SolveResult& result, const LinearProgram& lp) {
  if (!result.has_duals)
    throw DualsUnavailable("result carries no multipliers (integer solve or non-optimal status)");
  if (result.status != SolveStatus::Optimal)
    throw DualsUnavailable("duals are only defined for optimal results");
  if (result.row_duals.size() != lp.rows.size() ||
      result.primal.size() != static_cast<std::size_t>(lp.num_vars))
    throw DualsUnavailable("result does not match this model");
  return Duals{result.row_duals, result.lower_duals, result.upper_duals};
}

double KktReport::max_residual() const {
  return std::max({stationarity, primal, complementarity, dual_sign, duality_gap});
}

double dual_objective(const LinearProgram& lp, const SolveResult& result) {
  double obj = 0.0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) obj += lp.rows[i].rhs * result.row_duals[i];
  for (int j = 0; j < lp.num_vars; ++j) {
    if (std::isfinite(lp.lower[j])) obj += lp.lower[j] * result.lower_duals[j];
    if (std::isfinite(lp.upper[j])) obj -= lp.upper[j] * result.upper_duals[j];
  }
  return obj;
}

KktReport kkt_residuals(const LinearProgram& lp, const SolveResult& result) {
  KktReport rep;
  const auto& x = result.primal;
  const auto& y = result.row_duals;

  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Row& r = lp.rows[i];
    double act = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) act += r.coeffs[j] * x[j];
    const double slack = act - r.rhs;
    switch (r.sense) {
      case Sense::LessEqual:
        rep.primal = std::max(rep.primal, slack);
        rep.dual_sign = std::max(rep.dual_sign, y[i]);  // must be <= 0
        break;
      case Sense::GreaterEqual:
        rep.primal = std::max(rep.primal, -slack);
        rep.dual_sign = std::max(rep.dual_sign, -y[i]);  // must be >= 0
        break;
      case Sense::Equal:
        rep.primal = std::max(rep.primal, std::abs(slack));
        break;
    }
    if (r.sense != Sense::Equal)
      rep.complementarity = std::max(rep.complementarity, std::abs(y[i] * slack));
  }

  for (int j = 0; j < lp.num_vars; ++j) {
    double stat = lp.objective[j];
    for (std::size_t i = 0; i < lp.rows.size(); ++i) stat -= y[i] * lp.rows[i].coeffs[j];
    stat -= result.lower_duals[j];
    stat += result.upper_duals[j];
    rep.stationarity = std::max(rep.stationarity, std::abs(stat));

    rep.dual_sign = std::max(rep.dual_sign, -result.lower_duals[j]);
    rep.dual_sign = std::max(rep.dual_sign, -result.upper_duals[j]);
    if (std::isfinite(lp.lower[j])) {
      rep.primal = std::max(rep.primal, lp.lower[j] - x[j]);
      rep.complementarity =
          std::max(rep.complementarity, std::abs(result.lower_duals[j] * (x[j] - lp.lower[j])));
    }
    if (std::isfinite(lp.upper[j])) {
      rep.primal = std::max(rep.primal, x[j] - lp.upper[j]);
      rep.complementarity =
          std::max(rep.complementarity, std::abs(result.upper_duals[j] * (lp.upper[j] - x[j])));
    }
  }

  const double scale = 1.0 + std::abs(result.objective);
  rep.duality_gap = std::abs(result.objective - dual_objective(lp, result)) / scale;
  return rep;
}

}  // namespace decopt::opt
