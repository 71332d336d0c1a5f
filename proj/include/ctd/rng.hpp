#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ctd {

// Derives an independent stream seed from a base seed and a stream index.
// Used so that per-trial / per-episode streams do not depend on worker
// scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Thin wrapper around mt19937_64 with explicit, platform-stable draw
// conversions (no std::*_distribution, whose output is implementation
// defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index sampled by inverse CDF; probs must sum to ~1.
  int categorical(std::span<const double> probs);

 private:
  std::mt19937_64 gen_;
};

}  // namespace ctd
