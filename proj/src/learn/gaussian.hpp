#pragma once

#include <span>
#include <vector>

#include "common/rng.hpp"
#include "learn/mlp.hpp"

namespace decopt::learn {

// Diagonal-Gaussian stochastic policy: the mean comes from an MLP, the
// per-dimension log standard deviation is a state-independent learnable
// vector initialized to zero.
struct GaussianPolicy {
  Mlp mean_net;
  std::vector<double> log_std;

  GaussianPolicy() = default;
  GaussianPolicy(Mlp net) : mean_net(std::move(net)) {
    log_std.assign(mean_net.output_dim(), 0.0);
  }

  int action_dim() const { return mean_net.output_dim(); }

  std::vector<double> mean_action(std::span<const double> obs) const {
    return mean_net.forward(obs);
  }

  // action = mean + exp(log_std) * eps, eps ~ N(0, I). Optionally reports
  // the exact log-density at the sampled action.
  std::vector<double> sample(std::span<const double> obs, Rng& rng,
                             double* log_prob = nullptr) const;

  double log_prob(std::span<const double> obs, std::span<const double> action) const;

  // Gradient of log pi(action | obs) with respect to the mean-net
  // parameters and log_std, scaled by `weight` and accumulated into the
  // given buffers. Returns the log-density.
  double accumulate_log_prob_grad(std::span<const double> obs, std::span<const double> action,
                                  double weight, std::vector<double>& mean_grad,
                                  std::vector<double>& log_std_grad) const;
};

}  // namespace decopt::learn
