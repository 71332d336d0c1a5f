#pragma once

#include <utility>
#include <vector>

#include "ctd/weights.hpp"

namespace ctd {

// Worst-case error shrink factor per backup: sum_k c_k gamma^k. In (0, 1];
// equals 1 iff gamma = 1. Linear in the weights.
double contraction_modulus(const WeightVector& w, double gamma);

// First moment of the length distribution: sum_k c_k k.
double center_of_mass(const WeightVector& w);

// The (possibly fractional) n whose n-step return shares the weighted
// average's error-reduction coefficient: log_gamma of the contraction
// modulus for gamma < 1, the center of mass at gamma = 1.
double effective_nstep(const WeightVector& w, double gamma);

// The lambda whose lambda-return matches the n-step return's contraction
// modulus (gamma < 1) or COM (gamma = 1):
// (1 - gamma^(n-1)) / (1 - gamma^n), or (n-1)/n at gamma = 1.
// n may be fractional; n >= 1 required.
double effective_lambda(double n, double gamma);

// Reference (n, lambda) rows with equal COMs, lambda = (n-1)/n, for
// n in {2, 3, 4, 5, 10, 20, 50, 100}.
std::vector<std::pair<int, double>> com_pair_table();

}  // namespace ctd
