#pragma once

#include "ctd/weights.hpp"

namespace ctd {

// TD-error variance/correlation model: every TD error has variance kappa
// and every distinct pair has correlation rho (rho >= 0 because infinitely
// many TD errors cannot all be negatively correlated).
struct VarianceParams {
  double kappa;  // per-TD-error variance, squared reward units
  double rho;    // uniform pairwise correlation, in [0, 1]
  double gamma;  // discount, in (0, 1]

  void check() const;
};

// Partial geometric sum with ratio gamma^k over n terms:
// (1 - gamma^(k n)) / (1 - gamma^k) for gamma < 1, and n at gamma = 1
// (explicit branch, not a limit).
double gamma_sum(int k, double n, double gamma);

// Variance of an n-step return:
// (1-rho) * gamma_sum(2,n) * kappa + rho * gamma_sum(1,n)^2 * kappa.
double nstep_variance(int n, const VarianceParams& p);

// Covariance between n1- and n2-step returns from the same state:
// (1-rho) * gamma_sum(2,min) * kappa + rho * gamma_sum(1,n1) *
// gamma_sum(1,n2) * kappa. Symmetric; diagonal equals nstep_variance.
double nstep_covariance(int n1, int n2, const VarianceParams& p);

// Variance of a compound return with cumulative TD-error weights h:
// (1-rho) sum_i gamma^2i h_i^2 kappa + rho (sum_i gamma^i h_i)^2 kappa.
// The correlated term uses the squared single sum; the O(L^2) double sum
// is kept as a test oracle only.
double compound_variance(const CumulativeWeights& h, const VarianceParams& p);

// Closed-form variance of the (untruncated) lambda-return:
// (1-rho) kappa / (1-(gamma lambda)^2) + rho kappa / (1-gamma lambda)^2.
// Requires gamma * lambda < 1.
double lambda_variance(double lambda, const VarianceParams& p);

// Upper bound on Var[G^n] - Var[G^lambda] for a COM-matched pair, at its
// gamma = 1 maximum: (1-rho) * lambda / (1-lambda^2) * kappa.
double lambda_reduction_bound(double lambda, const VarianceParams& p);

}  // namespace ctd
