#pragma once
// Deterministic pseudo-random utilities for reproducible experiments.
//
// The library deliberately avoids std::uniform_real_distribution and friends:
// their output sequences are implementation-defined, so identical seeds could
// produce different artifacts under different standard libraries.  Instead we
// fix a concrete, well-known generator (xoshiro256**) seeded through
// splitmix64, and construct uniform doubles with the standard 53-bit recipe.
// Every number an experiment emits is then a pure function of its seed.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmlab {

/// Advances a splitmix64 state and returns the next output word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent child seed from (master, stream).
///
/// Each (run, component) pair gets its own generator via a distinct stream
/// index, so adding seeds or components never perturbs existing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  return splitmix64_next(s);
}

/**
 * xoshiro256** pseudo-random generator with value semantics.
 *
 * Satisfies UniformRandomBitGenerator.  The state is expanded from a single
 * 64-bit seed with splitmix64, which guarantees a non-zero state and
 * decorrelates consecutive integer seeds.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_next(s);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1): the top 53 bits scaled by 2^-53.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform double in (0, 1); rejects the (probability 2^-53) exact zero.
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

/// Samples an index from a probability vector by an inverse-CDF walk.
///
/// The vector must be nonnegative and sum to ~1; any rounding residue is
/// absorbed by the last index so a valid arm is always returned.
inline int sample_index(const std::vector<double>& probs, Rng& rng) {
  if (probs.empty()) {
    throw std::invalid_argument("sample_index: empty probability vector");
  }
  const double u = rng.uniform();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace mmlab
