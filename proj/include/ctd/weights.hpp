#pragma once

#include <map>
#include <utility>
#include <vector>

namespace ctd {

// A return-weighting scheme: nonnegative weights c_n over n-step lengths,
// finite support, summing to 1. Immutable after construction.
class WeightVector {
 public:
  // Validates and normal-form-constructs from (length, weight) pairs.
  // Zero weights are dropped; throws std::invalid_argument on any
  // violated invariant (negative weight, length < 1, empty support,
  // |sum - 1| > 1e-12).
  static WeightVector from_entries(const std::map<int, double>& entries);

  // All weight on a single length n.
  static WeightVector nstep(int n);

  // Geometric weights c_n = (1-lambda) lambda^(n-1) for n < horizon, with
  // the residual mass placed on the horizon itself, so an episodic
  // truncation assigns all remaining weight to the longest return.
  // Requires lambda in [0,1) and horizon >= 1; sums to 1 exactly.
  static WeightVector lambda(double lambda, int horizon);

  // {n1: 1-c, n2: c}; requires n1 < n2 and c in (0,1).
  static WeightVector two_bootstrap(int n1, int n2, double c);

  // Convex combination of two weight vectors: (1-t) a + t b.
  static WeightVector mix(const WeightVector& a, const WeightVector& b,
                          double t);

  // Sorted (length, weight) pairs with strictly positive weights.
  const std::vector<std::pair<int, double>>& entries() const {
    return entries_;
  }

  // Weight at length n, 0 if absent.
  double weight(int n) const;

  int max_length() const { return entries_.back().first; }

  // True iff at least two weights are nonzero.
  bool is_compound() const { return entries_.size() >= 2; }

 private:
  explicit WeightVector(std::vector<std::pair<int, double>> entries)
      : entries_(std::move(entries)) {}

  std::vector<std::pair<int, double>> entries_;
};

// Per-TD-error weights h_i = sum_{n > i} c_n, i = 0 .. max_length-1.
// h_0 = 1, nonincreasing, each h_i in [0, 1].
class CumulativeWeights {
 public:
  explicit CumulativeWeights(const WeightVector& w);

  double operator[](std::size_t i) const {
    return i < h_.size() ? h_[i] : 0.0;
  }

  std::size_t size() const { return h_.size(); }

  const std::vector<double>& values() const { return h_; }

 private:
  std::vector<double> h_;
};

}  // namespace ctd
