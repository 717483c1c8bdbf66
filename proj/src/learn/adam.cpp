#include "learn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace decopt::learn {

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam: shape mismatch");
  if (state.m.size() != params.size()) state.init(params.size());
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

}  // namespace decopt::learn
