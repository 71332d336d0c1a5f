#include "ctd/variance.hpp"

#include <cmath>
#include <stdexcept>

namespace ctd {

void VarianceParams::check() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be finite and >= 0");
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must be in [0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
}

double gamma_sum(int k, double n, double gamma) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n < 0.0) throw std::invalid_argument("n must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (gamma == 1.0) return n;
  const double ratio = std::pow(gamma, k);
  return (1.0 - std::pow(ratio, n)) / (1.0 - ratio);
}

double nstep_variance(int n, const VarianceParams& p) {
  p.check();
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double g1 = gamma_sum(1, n, p.gamma);
  const double g2 = gamma_sum(2, n, p.gamma);
  return (1.0 - p.rho) * g2 * p.kappa + p.rho * g1 * g1 * p.kappa;
}

double nstep_covariance(int n1, int n2, const VarianceParams& p) {
  p.check();
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("lengths must be >= 1");
  const double shared = gamma_sum(2, std::min(n1, n2), p.gamma);
  return (1.0 - p.rho) * shared * p.kappa +
         p.rho * gamma_sum(1, n1, p.gamma) * gamma_sum(1, n2, p.gamma) *
             p.kappa;
}

double compound_variance(const CumulativeWeights& h, const VarianceParams& p) {
  p.check();
  double sq = 0.0;      // sum gamma^2i h_i^2
  double linear = 0.0;  // sum gamma^i h_i
  double power = 1.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double term = power * h[i];
    sq += term * term;
    linear += term;
    power *= p.gamma;
  }
  return (1.0 - p.rho) * sq * p.kappa + p.rho * linear * linear * p.kappa;
}

double lambda_variance(double lambda, const VarianceParams& p) {
  p.check();
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const double gl = p.gamma * lambda;
  if (gl >= 1.0)
    throw std::invalid_argument("lambda_variance requires gamma*lambda < 1");
  return (1.0 - p.rho) * p.kappa / (1.0 - gl * gl) +
         p.rho * p.kappa / ((1.0 - gl) * (1.0 - gl));
}

double lambda_reduction_bound(double lambda, const VarianceParams& p) {
  p.check();
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must be in [0, 1)");
  return (1.0 - p.rho) * lambda / (1.0 - lambda * lambda) * p.kappa;
}

}  // namespace ctd
