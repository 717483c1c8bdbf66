#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "common/rng.hpp"

namespace decopt::learn {

// Fully-connected network, tanh hidden activations, identity output.
// Parameters live in one flat vector so the optimizer can treat them
// uniformly.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> widths);

  // Standard architecture used throughout: in -> 32 -> 32 -> out.
  static Mlp standard(int in, int out, Rng& rng, bool zero_output_layer = false);

  void init(Rng& rng, bool zero_output_layer = false);

  int input_dim() const { return widths_.front(); }
  int output_dim() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  std::vector<double> forward(std::span<const double> x) const;

  struct Tape {
    // h[0] is the input, h[l] the post-activation output of layer l-1.
    std::vector<std::vector<double>> h;
  };
  std::vector<double> forward(std::span<const double> x, Tape& tape) const;

  // Accumulates dLoss/dparams into `grad` (same layout as params()) given
  // dLoss/doutput; optionally also yields dLoss/dinput.
  void backward(const Tape& tape, std::span<const double> dout, std::vector<double>& grad,
                std::vector<double>* dinput = nullptr) const;

 private:
  std::vector<int> widths_;
  std::vector<double> params_;
  std::vector<std::size_t> w_off_, b_off_;

  int layers() const { return static_cast<int>(widths_.size()) - 1; }
};

}  // namespace decopt::learn
