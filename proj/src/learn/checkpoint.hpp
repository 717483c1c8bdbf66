#pragma once

#include <string>

#include "learn/trainer.hpp"

namespace decopt::learn {

struct Checkpoint {
  GaussianPolicy policy;
  Mlp critic;
  TrainConfig config;
  std::vector<std::uint64_t> rng_state;  // optional resume state
  int epochs_done = 0;
};

// Named-tensor text format; doubles round-trip exactly.
void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace decopt::learn
