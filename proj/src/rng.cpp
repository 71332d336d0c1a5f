#include "ctd/rng.hpp"

namespace ctd {

namespace {

// splitmix64 finalizer; full-period mixing of the combined seed.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ (stream * 0xd6e8feb86659fd93ULL + 1));
}

int Rng::categorical(std::span<const double> probs) {
  const double u = uniform();
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return static_cast<int>(i);
  }
  // u fell into the rounding gap at the top of the CDF.
  return last_positive;
}

}  // namespace ctd
