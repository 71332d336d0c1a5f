#include "ctd/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctd {

namespace {
constexpr double kSumTolerance = 1e-12;
}

WeightVector WeightVector::from_entries(const std::map<int, double>& entries) {
  std::vector<std::pair<int, double>> kept;
  kept.reserve(entries.size());
  double sum = 0.0;
  for (const auto& [n, c] : entries) {
    if (n < 1) throw std::invalid_argument("weight length must be >= 1");
    if (c < 0.0 || !std::isfinite(c))
      throw std::invalid_argument("weights must be finite and >= 0");
    if (c == 0.0) continue;
    kept.emplace_back(n, c);
    sum += c;
  }
  if (kept.empty()) throw std::invalid_argument("weight support is empty");
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument("weights must sum to 1");
  return WeightVector(std::move(kept));
}

WeightVector WeightVector::nstep(int n) {
  if (n < 1) throw std::invalid_argument("n-step length must be >= 1");
  return WeightVector({{n, 1.0}});
}

WeightVector WeightVector::lambda(double lambda, int horizon) {
  if (lambda < 0.0 || lambda >= 1.0)
    throw std::invalid_argument("lambda must be in [0, 1)");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  std::vector<std::pair<int, double>> entries;
  entries.reserve(static_cast<std::size_t>(horizon));
  double geom = 1.0;  // lambda^(n-1)
  double partial = 0.0;
  for (int n = 1; n < horizon; ++n) {
    const double c = (1.0 - lambda) * geom;
    if (c > 0.0) entries.emplace_back(n, c);
    partial += c;
    geom *= lambda;
    if (geom == 0.0) break;
  }
  // Residual mass lambda^(horizon-1), taken as 1 - partial so the weights
  // sum to 1 exactly.
  const double residual = 1.0 - partial;
  if (residual > 0.0) entries.emplace_back(horizon, residual);
  return WeightVector(std::move(entries));
}

WeightVector WeightVector::two_bootstrap(int n1, int n2, double c) {
  if (n1 < 1) throw std::invalid_argument("n1 must be >= 1");
  if (n1 >= n2) throw std::invalid_argument("two_bootstrap requires n1 < n2");
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("two_bootstrap weight c must be in (0, 1)");
  return WeightVector({{n1, 1.0 - c}, {n2, c}});
}

WeightVector WeightVector::mix(const WeightVector& a, const WeightVector& b,
                               double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("mix parameter must be in [0, 1]");
  std::map<int, double> merged;
  for (const auto& [n, c] : a.entries()) merged[n] += (1.0 - t) * c;
  for (const auto& [n, c] : b.entries()) merged[n] += t * c;
  return from_entries(merged);
}

double WeightVector::weight(int n) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), n,
      [](const std::pair<int, double>& e, int key) { return e.first < key; });
  if (it != entries_.end() && it->first == n) return it->second;
  return 0.0;
}

CumulativeWeights::CumulativeWeights(const WeightVector& w) {
  const int len = w.max_length();
  h_.assign(static_cast<std::size_t>(len), 0.0);
  // Tail sums keep small h_i relatively accurate; h_0 is pinned to the
  // normalization invariant.
  double tail = 0.0;
  auto it = w.entries().rbegin();
  for (int i = len - 1; i >= 1; --i) {
    while (it != w.entries().rend() && it->first > i) {
      tail += it->second;
      ++it;
    }
    h_[static_cast<std::size_t>(i)] = std::min(tail, 1.0);
  }
  h_[0] = 1.0;
}

}  // namespace ctd
