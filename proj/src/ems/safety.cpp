#include "ems/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decopt::ems {

policy::Decision safety_layer_project(const std::vector<double>& proposal,
                                      const std::vector<double>& lower,
                                      const std::vector<double>& upper, double target,
                                      double tol) {
  const std::size_t n = proposal.size();
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("projection bounds length mismatch");
  double lo_sum = 0.0, hi_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i] > upper[i]) throw EmptyFeasible("projection box is empty");
    lo_sum += lower[i];
    hi_sum += upper[i];
  }
  if (lo_sum > target + tol) throw EmptyFeasible("bound sum exceeds the balance target");
  if (hi_sum < target - tol) throw EmptyFeasible("bound sum cannot reach the balance target");

  auto clipped_sum = [&](double tau) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += std::clamp(proposal[i] + tau, lower[i], upper[i]);
    return s;
  };

  // Bracket tau, expanding geometrically (upper bounds may be infinite).
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200 && clipped_sum(lo) > target; ++it) lo *= 2.0;
  for (int it = 0; it < 200 && clipped_sum(hi) < target; ++it) hi *= 2.0;

  for (int it = 0; it < 500; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = clipped_sum(mid);
    if (std::abs(s - target) <= tol) {
      lo = hi = mid;
      break;
    }
    (s < target ? lo : hi) = mid;
    if (hi - lo < 1e-15 * (1.0 + std::abs(hi))) break;
  }
  const double tau = 0.5 * (lo + hi);
  policy::Decision z;
  z.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) z.values[i] = std::clamp(proposal[i] + tau, lower[i], upper[i]);
  // The clipped sum is piecewise linear; distribute any residual over the
  // strictly interior coordinates to meet the balance exactly.
  double resid = target;
  for (double v : z.values) resid -= v;
  if (std::abs(resid) > tol) {
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < n; ++i)
      if (z.values[i] > lower[i] + tol && z.values[i] < upper[i] - tol) interior.push_back(i);
    if (!interior.empty()) {
      const double share = resid / static_cast<double>(interior.size());
      for (std::size_t i : interior) z.values[i] += share;
    }
  }
  resid = target;
  for (double v : z.values) resid -= v;
  z.feasible = std::abs(resid) <= std::max(tol, 1e-9);
  if (!z.feasible) throw EmptyFeasible("projection failed to meet the balance");
  return z;
}

}  // namespace decopt::ems
