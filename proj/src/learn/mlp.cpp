#include "learn/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace decopt::learn {

Mlp::Mlp(std::vector<int> widths) : widths_(std::move(widths)) {
  if (widths_.size() < 2) throw std::invalid_argument("mlp needs at least two widths");
  std::size_t total = 0;
  for (int l = 0; l < layers(); ++l) {
    w_off_.push_back(total);
    total += static_cast<std::size_t>(widths_[l + 1]) * widths_[l];
    b_off_.push_back(total);
    total += static_cast<std::size_t>(widths_[l + 1]);
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::standard(int in, int out, Rng& rng, bool zero_output_layer) {
  Mlp net({in, 32, 32, out});
  net.init(rng, zero_output_layer);
  return net;
}

void Mlp::init(Rng& rng, bool zero_output_layer) {
  for (int l = 0; l < layers(); ++l) {
    const int fan_in = widths_[l], fan_out = widths_[l + 1];
    const bool zero = zero_output_layer && l == layers() - 1;
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    for (int i = 0; i < fan_out * fan_in; ++i)
      params_[w_off_[l] + i] = zero ? 0.0 : rng.uniform(-s, s);
    for (int i = 0; i < fan_out; ++i) params_[b_off_[l] + i] = 0.0;
  }
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Tape tape;
  return forward(x, tape);
}

std::vector<double> Mlp::forward(std::span<const double> x, Tape& tape) const {
  if (static_cast<int>(x.size()) != input_dim())
    throw std::invalid_argument("mlp input dimension mismatch");
  tape.h.assign(1, std::vector<double>(x.begin(), x.end()));
  std::vector<double> cur(x.begin(), x.end());
  for (int l = 0; l < layers(); ++l) {
    const int in = widths_[l], out = widths_[l + 1];
    std::vector<double> next(out);
    const double* w = &params_[w_off_[l]];
    const double* b = &params_[b_off_[l]];
    for (int i = 0; i < out; ++i) {
      double acc = b[i];
      const double* wrow = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) acc += wrow[j] * cur[j];
      next[i] = (l == layers() - 1) ? acc : std::tanh(acc);
    }
    cur = std::move(next);
    tape.h.push_back(cur);
  }
  return cur;
}

void Mlp::backward(const Tape& tape, std::span<const double> dout, std::vector<double>& grad,
                   std::vector<double>* dinput) const {
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  if (static_cast<int>(dout.size()) != output_dim())
    throw std::invalid_argument("dout dimension mismatch");
  std::vector<double> delta(dout.begin(), dout.end());
  for (int l = layers() - 1; l >= 0; --l) {
    const int in = widths_[l], out = widths_[l + 1];
    const std::vector<double>& hin = tape.h[l];
    double* gw = &grad[w_off_[l]];
    double* gb = &grad[b_off_[l]];
    const double* w = &params_[w_off_[l]];
    std::vector<double> dprev(in, 0.0);
    for (int i = 0; i < out; ++i) {
      const double d = delta[i];
      gb[i] += d;
      double* gwrow = gw + static_cast<std::size_t>(i) * in;
      const double* wrow = w + static_cast<std::size_t>(i) * in;
      for (int j = 0; j < in; ++j) {
        gwrow[j] += d * hin[j];
        dprev[j] += wrow[j] * d;
      }
    }
    if (l > 0) {
      // Chain through the tanh of the previous layer's output.
      for (int j = 0; j < in; ++j) dprev[j] *= 1.0 - hin[j] * hin[j];
    }
    delta = std::move(dprev);
  }
  if (dinput) *dinput = std::move(delta);
}

}  // namespace decopt::learn
