#pragma once

#include <cstddef>
#include <vector>

namespace decopt::learn {

struct AdamState {
  std::vector<double> m, v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void init(std::size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    step = 0;
  }
};

// Bias-corrected Adam step, minimizing: params -= lr * mhat / (sqrt(vhat) + eps).
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr);

}  // namespace decopt::learn
