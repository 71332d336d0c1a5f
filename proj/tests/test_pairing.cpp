#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "ctd/pairing.hpp"
#include "ctd/rng.hpp"
#include "ctd/variance.hpp"
#include "ctd/weights.hpp"

using namespace ctd;

TEST_SUITE("pairing") {

TEST_CASE("contraction modulus") {
  for (int n : {1, 4, 9})
    CHECK(contraction_modulus(WeightVector::nstep(n), 0.9) ==
          doctest::Approx(std::pow(0.9, n)).epsilon(1e-14));
  CHECK(contraction_modulus(WeightVector::two_bootstrap(4, 16, 0.515), 0.99) ==
        doctest::Approx(std::pow(0.99, 10)).epsilon(5e-4));
  CHECK(contraction_modulus(WeightVector::lambda(0.8, 40), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("contraction modulus is linear in the weights") {
  Rng rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const WeightVector a = WeightVector::two_bootstrap(1, 7, 0.3);
    const WeightVector b = WeightVector::lambda(0.6, 25);
    const double t = rng.uniform();
    const double gamma = 0.5 + 0.5 * rng.uniform();
    const double mixed = contraction_modulus(WeightVector::mix(a, b, t), gamma);
    const double interp = (1.0 - t) * contraction_modulus(a, gamma) +
                          t * contraction_modulus(b, gamma);
    CHECK(mixed == doctest::Approx(interp).epsilon(1e-12));
  }
}

TEST_CASE("two-bootstrap modulus interpolates its endpoints") {
  const double gamma = 0.93;
  double prev = contraction_modulus(WeightVector::two_bootstrap(2, 9, 1e-9),
                                    gamma);
  for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double beta =
        contraction_modulus(WeightVector::two_bootstrap(2, 9, c), gamma);
    CHECK(beta < std::pow(gamma, 2));
    CHECK(beta > std::pow(gamma, 9));
    CHECK(beta < prev);  // decreasing in c
    prev = beta;
  }
}

TEST_CASE("center of mass") {
  CHECK(center_of_mass(WeightVector::nstep(7)) == 7.0);
  CHECK(center_of_mass(WeightVector::from_entries({{1, 0.5}, {3, 0.5}})) ==
        doctest::Approx(2.0));
  CHECK(center_of_mass(WeightVector::lambda(0.8, 2000)) ==
        doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("effective n-step") {
  SUBCASE("n-step weightings are fixed points") {
    for (double gamma : {0.5, 0.9, 0.99})
      for (int n : {1, 7, 23})
        CHECK(effective_nstep(WeightVector::nstep(n), gamma) ==
              doctest::Approx(n).epsilon(1e-12));
    CHECK(effective_nstep(WeightVector::nstep(7), 0.99) ==
          doctest::Approx(7.0).epsilon(1e-12));
  }
  SUBCASE("paper pair lands near its target") {
    CHECK(effective_nstep(WeightVector::two_bootstrap(1, 6, 0.406), 0.99) ==
          doctest::Approx(3.0).epsilon(1e-2));
  }
  SUBCASE("continuous at gamma -> 1") {
    const WeightVector w = WeightVector::from_entries({{2, 0.4}, {9, 0.6}});
    const double near_one = effective_nstep(w, 1.0 - 1e-6);
    CHECK(near_one == doctest::Approx(center_of_mass(w)).epsilon(1e-3));
    CHECK(effective_nstep(w, 1.0) == doctest::Approx(center_of_mass(w)));
  }
}

TEST_CASE("effective lambda") {
  CHECK(effective_lambda(10, 0.99) == doctest::Approx(0.904).epsilon(6e-4));
  CHECK(effective_lambda(1, 0.5) == 0.0);
  CHECK(effective_lambda(1, 1.0) == 0.0);
  CHECK(effective_lambda(5, 1.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(effective_lambda(0.5, 0.9), std::invalid_argument);
}

TEST_CASE("COM pair table") {
  const auto rows = com_pair_table();
  REQUIRE(rows.size() == 8);
  CHECK(rows[0] == std::pair<int, double>{2, 0.5});
  CHECK(rows.back().first == 100);
  CHECK(rows.back().second == doctest::Approx(0.99));
  // n = 3 renders as 0.67 at two decimals
  CHECK(std::round(rows[1].second * 100.0) / 100.0 == doctest::Approx(0.67));
}

TEST_CASE("matched lambda weights recover the target effective n-step") {
  for (double gamma : {0.9, 0.99, 1.0}) {
    for (int n : {2, 5, 10, 20}) {
      const double lambda = effective_lambda(n, gamma);
      const WeightVector w = WeightVector::lambda(lambda, 6000);
      CHECK(effective_nstep(w, gamma) == doctest::Approx(n).epsilon(1e-6));
    }
  }
}

TEST_CASE("gamma_sum is invariant under matched weighted averages") {
  // sum_i c_i Gamma_1(i) = Gamma_1(effective n-step)
  Rng rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const double gamma = rep % 4 == 0 ? 1.0 : 0.5 + 0.5 * rng.uniform();
    const int n1 = 1 + static_cast<int>(rng.uniform() * 6);
    const int n2 = n1 + 1 + static_cast<int>(rng.uniform() * 15);
    const WeightVector w =
        WeightVector::two_bootstrap(n1, n2, 0.05 + 0.9 * rng.uniform());
    double lhs = 0.0;
    for (const auto& [k, c] : w.entries()) lhs += c * gamma_sum(1, k, gamma);
    const double rhs = gamma_sum(1, effective_nstep(w, gamma), gamma);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

}  // TEST_SUITE
