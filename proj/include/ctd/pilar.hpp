#pragma once

#include <vector>

#include "ctd/weights.hpp"

namespace ctd {

// A two-bootstrap return (1-c) G^(n1) + c G^(n2) selected to mimic the
// TD(lambda) weight profile at a target effective n-step.
struct PilarResult {
  int n1;
  int n2;
  double c;
  double error;  // max absolute TD-error weight deviation

  WeightVector weights() const;
};

// Max over i in [0, n2] of |gamma^i h_i - (gamma lambda)^i| where h is the
// two-bootstrap step profile (1 below n1, c on [n1, n2), 0 beyond). Terms
// past n2 are dominated by the i = n2 term, so the scan stops there.
double pilar_weight_error(double lambda, int n1, int n2, double c,
                          double gamma);

// Searches (n1, n2, c) for the target effective n-step: lambda from the
// modulus/COM match, outer loop n1 in {1..floor(n)}, inner loop n2 upward
// from floor(n)+1 until the error stops strictly decreasing, c solved so
// the pair keeps the target's contraction modulus (gamma < 1) or COM
// (gamma = 1). Candidates whose c falls outside (0,1) are infeasible and
// skipped. First-found wins on ties. Throws if no candidate is feasible
// (n = 1 admits no two-bootstrap average).
PilarResult pilar_search(double n, double gamma);

// One search per target, same order.
std::vector<PilarResult> pilar_table(double gamma,
                                     const std::vector<double>& targets);

}  // namespace ctd
