#include "common/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace decopt {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  // 53-bit mantissa in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::normal() {
  // Box-Muller; u kept away from 0 so the log is finite.
  const double u = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double v = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
}

double Rng::normal(double mean, double stddev) { return mean + stddev * normal(); }

std::int64_t Rng::poisson(double lambda) {
  if (lambda <= 0.0) return 0;
  if (lambda < 30.0) {
    const double l = std::exp(-lambda);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }
  const double draw = std::round(normal(lambda, std::sqrt(lambda)));
  return draw < 0.0 ? 0 : static_cast<std::int64_t>(draw);
}

Rng Rng::child(std::string_view label, std::uint64_t index) const {
  std::uint64_t mix = s_[0] ^ rotl(s_[2], 13);
  mix ^= hash_label(label);
  mix += 0x632be59bd9b4e019ull * (index + 1);
  return Rng(mix);
}

std::uint64_t Rng::state_hash() const { return s_[0] ^ rotl(s_[1], 7) ^ rotl(s_[2], 29) ^ rotl(s_[3], 47); }

std::vector<std::uint64_t> Rng::state() const { return {s_[0], s_[1], s_[2], s_[3]}; }

void Rng::set_state(const std::vector<std::uint64_t>& s) {
  if (s.size() != 4) throw std::out_of_range("rng state needs four words");
  for (int i = 0; i < 4; ++i) s_[i] = s[i];
}

}  // namespace decopt
