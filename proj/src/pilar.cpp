#include "ctd/pilar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ctd/pairing.hpp"

namespace ctd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// c that equates the pair's contraction modulus (gamma < 1) or COM
// (gamma = 1) with the target n-step's. May fall outside (0,1) when the
// target modulus is not between the endpoints'.
double matching_c(double n, int n1, int n2, double gamma) {
  if (gamma == 1.0)
    return (n - n1) / static_cast<double>(n2 - n1);
  return (std::pow(gamma, n) - std::pow(gamma, n1)) /
         (std::pow(gamma, n2) - std::pow(gamma, n1));
}

}  // namespace

WeightVector PilarResult::weights() const {
  return WeightVector::two_bootstrap(n1, n2, c);
}

double pilar_weight_error(double lambda, int n1, int n2, double c,
                          double gamma) {
  if (n1 < 1 || n1 >= n2) throw std::invalid_argument("need 1 <= n1 < n2");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (!(lambda >= 0.0 && gamma * lambda < 1.0))
    throw std::invalid_argument("need 0 <= gamma*lambda < 1");
  double worst = 0.0;
  double gpow = 1.0;   // gamma^i
  double glpow = 1.0;  // (gamma lambda)^i
  for (int i = 0; i <= n2; ++i) {
    const double h = i < n1 ? 1.0 : (i < n2 ? c : 0.0);
    worst = std::max(worst, std::abs(gpow * h - glpow));
    gpow *= gamma;
    glpow *= gamma * lambda;
  }
  return worst;
}

PilarResult pilar_search(double n, double gamma) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  const double lambda = effective_lambda(n, gamma);
  const int floor_n = static_cast<int>(std::floor(n));

  PilarResult best{0, 0, 0.0, kInf};
  for (int n1 = 1; n1 <= floor_n; ++n1) {
    int n2 = floor_n;
    double error = kInf;
    double prev_error;
    do {
      ++n2;
      const double c = matching_c(n, n1, n2, gamma);
      prev_error = error;
      error = (c > 0.0 && c < 1.0) ? pilar_weight_error(lambda, n1, n2, c,
                                                        gamma)
                                   : kInf;
      if (error < best.error) best = {n1, n2, c, error};
    } while (error < prev_error);
  }
  if (best.error == kInf)
    throw std::domain_error("no feasible two-bootstrap return for this n");
  return best;
}

std::vector<PilarResult> pilar_table(double gamma,
                                     const std::vector<double>& targets) {
  if (targets.empty()) throw std::invalid_argument("targets must be nonempty");
  std::vector<PilarResult> rows;
  rows.reserve(targets.size());
  for (double n : targets) rows.push_back(pilar_search(n, gamma));
  return rows;
}

}  // namespace ctd
