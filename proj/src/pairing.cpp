#include "ctd/pairing.hpp"

#include <cmath>
#include <stdexcept>

namespace ctd {

double contraction_modulus(const WeightVector& w, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  double beta = 0.0;
  for (const auto& [n, c] : w.entries()) beta += c * std::pow(gamma, n);
  return beta;
}

double center_of_mass(const WeightVector& w) {
  double com = 0.0;
  for (const auto& [n, c] : w.entries()) com += c * static_cast<double>(n);
  return com;
}

double effective_nstep(const WeightVector& w, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (gamma == 1.0) return center_of_mass(w);
  return std::log(contraction_modulus(w, gamma)) / std::log(gamma);
}

double effective_lambda(double n, double gamma) {
  if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (gamma == 1.0) return (n - 1.0) / n;
  return (1.0 - std::pow(gamma, n - 1.0)) / (1.0 - std::pow(gamma, n));
}

std::vector<std::pair<int, double>> com_pair_table() {
  std::vector<std::pair<int, double>> rows;
  for (int n : {2, 3, 4, 5, 10, 20, 50, 100})
    rows.emplace_back(n, effective_lambda(n, 1.0));
  return rows;
}

}  // namespace ctd
