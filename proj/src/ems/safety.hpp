#pragma once

#include <stdexcept>
#include <vector>

#include "policy/policy.hpp"

namespace decopt::ems {

struct EmptyFeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Euclidean projection of `proposal` onto { z : sum(z) = target,
// lower <= z <= upper }. Solved by bisection on the shared offset tau with
// z(tau) = clip(proposal + tau) until |sum(z) - target| <= tol.
policy::Decision safety_layer_project(const std::vector<double>& proposal,
                                      const std::vector<double>& lower,
                                      const std::vector<double>& upper, double target,
                                      double tol = 1e-9);

}  // namespace decopt::ems
