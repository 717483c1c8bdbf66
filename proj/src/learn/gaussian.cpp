#include "learn/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace decopt::learn {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

std::vector<double> GaussianPolicy::sample(std::span<const double> obs, Rng& rng,
                                           double* log_prob_out) const {
  std::vector<double> a = mean_net.forward(obs);
  double lp = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double sigma = std::exp(log_std[d]);
    const double eps = rng.normal();
    a[d] += sigma * eps;
    lp += -0.5 * eps * eps - log_std[d] - 0.5 * kLogTwoPi;
  }
  if (log_prob_out) *log_prob_out = lp;
  return a;
}

double GaussianPolicy::log_prob(std::span<const double> obs,
                                std::span<const double> action) const {
  const std::vector<double> mean = mean_net.forward(obs);
  if (action.size() != mean.size()) throw std::invalid_argument("action dimension mismatch");
  double lp = 0.0;
  for (std::size_t d = 0; d < mean.size(); ++d) {
    const double sigma = std::exp(log_std[d]);
    const double z = (action[d] - mean[d]) / sigma;
    lp += -0.5 * z * z - log_std[d] - 0.5 * kLogTwoPi;
  }
  return lp;
}

double GaussianPolicy::accumulate_log_prob_grad(std::span<const double> obs,
                                                std::span<const double> action, double weight,
                                                std::vector<double>& mean_grad,
                                                std::vector<double>& log_std_grad) const {
  Mlp::Tape tape;
  const std::vector<double> mean = mean_net.forward(obs, tape);
  if (action.size() != mean.size()) throw std::invalid_argument("action dimension mismatch");
  double lp = 0.0;
  std::vector<double> dmean(mean.size());
  for (std::size_t d = 0; d < mean.size(); ++d) {
    const double sigma = std::exp(log_std[d]);
    const double z = (action[d] - mean[d]) / sigma;
    lp += -0.5 * z * z - log_std[d] - 0.5 * kLogTwoPi;
    // d logp / d mean_d = z / sigma;  d logp / d log_std_d = z^2 - 1.
    dmean[d] = weight * z / sigma;
    log_std_grad[d] += weight * (z * z - 1.0);
  }
  mean_net.backward(tape, dmean, mean_grad);
  return lp;
}

}  // namespace decopt::learn
