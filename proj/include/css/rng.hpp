#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "css/errors.hpp"

namespace css {

// xoshiro256++ seeded through splitmix64, with hand-rolled distributions.
// Standard-library distributions are implementation defined, so seeded runs
// would not reproduce across toolchains; everything random in this project
// goes through this generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p < 0.0 || p > 1.0) throw ParameterError("bernoulli probability outside [0, 1]");
    return uniform() < p;
  }

  // Standard normal via Box-Muller; two uniforms per draw, no cached state.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ParameterError("below: empty range");
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

// Deterministic derivation of per-trial seeds from a base seed and indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t s = base;
  Rng::splitmix64(s);
  s ^= 0x632be59bd9b4e019ULL * (a + 1);
  Rng::splitmix64(s);
  s ^= 0x9e6c63d0a9c3f8ddULL * (b + 1);
  Rng::splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (c + 1);
  return Rng::splitmix64(s);
}

// Cumulative-sum inversion over exact scores. Zero-score entries occupy zero
// measure and are never drawn. Caller guarantees total > 0.
inline std::size_t draw_discrete(Rng& rng, const std::vector<double>& scores, double total) {
  if (!(total > 0.0)) throw DegenerateInputError("discrete draw from all-zero weights");
  const double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t last_positive = scores.size();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] <= 0.0) continue;
    cum += scores[i];
    last_positive = i;
    if (u < cum) return i;
  }
  return last_positive;  // guard against rounding at the top end
}

}  // namespace css
