#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace decopt {

// Deterministic xoshiro256++ generator. All stochastic code in the project
// draws through this class so that runs are bit-reproducible across
// platforms; the standard-library distributions are implementation-defined
// and therefore never used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller (explicit formula, no cached state so
  // that the stream position is predictable: one draw = two u64s).
  double normal();
  double normal(double mean, double stddev);

  // Poisson sample: inversion by sequential search for lambda < 30,
  // rounded normal approximation above.
  std::int64_t poisson(double lambda);

  // Derive an independent child stream from this stream's seed material
  // and a label; used to give methods/instances isolated substreams.
  Rng child(std::string_view label, std::uint64_t index = 0) const;

  std::uint64_t state_hash() const;

  // Raw state, for checkpoint/resume.
  std::vector<std::uint64_t> state() const;
  void set_state(const std::vector<std::uint64_t>& s);

 private:
  std::uint64_t s_[4];
};

// Stable 64-bit hash of a label (FNV-1a), used for seed derivation.
std::uint64_t hash_label(std::string_view label);

}  // namespace decopt
