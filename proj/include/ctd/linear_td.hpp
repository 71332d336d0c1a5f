#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ctd/mrp.hpp"
#include "ctd/returns.hpp"
#include "ctd/weights.hpp"

namespace ctd {

// Feature matrix phi: one row per state, d columns. Rows must satisfy
// |phi(s)|^2 <= 1; terminal states carry zero rows so their values are
// structurally 0. Fixed-point solvers additionally need full column rank.
struct LinearFeatures {
  Eigen::MatrixXd phi;

  int dim() const { return static_cast<int>(phi.cols()); }

  double value(int state, const Eigen::VectorXd& theta) const {
    return phi.row(state).dot(theta);
  }

  void check(const TabularMRP& mrp) const;
};

using Parameters = Eigen::VectorXd;

// One-hot features over the non-terminal states (zero rows at terminals).
LinearFeatures one_hot_features(const TabularMRP& mrp);

// One offline episodic backup: every target is computed against the value
// snapshot frozen at episode start, then all increments
// alpha * (G_t - v(S_t)) are applied at once.
void offline_episode_backup(std::vector<double>& values, const Trajectory& traj,
                            const WeightVector& w, double gamma, double alpha);

// One linear TD step on a rollout whose first state is the root:
// theta' = theta + alpha (G - phi(S0)^T theta) phi(S0), with the return
// bootstrapping on the current parameters.
Parameters linear_td_step(const Parameters& theta,
                          const LinearFeatures& features,
                          const Trajectory& rollout, const WeightVector& w,
                          double gamma, double alpha);

// Solves the projected multistep Bellman equation
//   Phi^T D (I - sum_n c_n (gamma P)^n) Phi theta
//     = Phi^T D sum_n c_n sum_{i<n} (gamma P)^i r_bar
// for the unique fixed point. Requires contraction modulus < 1 and full
// column rank features.
Parameters compound_fixed_point(const TabularMRP& mrp,
                                const LinearFeatures& features,
                                const std::vector<double>& d,
                                const WeightVector& w, double gamma);

// Both sides of the fixed-point quality bound:
//   |Phi theta* - v_pi|_D  <=  1/(1-beta) |Pi v_pi - v_pi|_D.
struct QualityGap {
  double lhs;
  double rhs;
};
QualityGap solution_quality_gap(const TabularMRP& mrp,
                                const LinearFeatures& features,
                                const std::vector<double>& d,
                                const WeightVector& w, double gamma);

// Finite-time check of averaged-iterate TD under the i.i.d. state model:
// runs `trials` independent runs of T steps from theta_0 = 0 at step size
// 1/sqrt(T) and compares mean |v_theta* - v_thetabar|^2_D against
//   (|theta*|^2 + 2 (1-beta)^2 C^2 + 2 sigma^2) / ((1-beta) sqrt(T))
// with C = (|r|_inf + (1+gamma) |theta*|_inf) / (1-gamma) and sigma^2 the
// d-weighted conditional variance of the compound error at theta*,
// estimated by Monte Carlo.
struct FiniteTimeReport {
  double empirical;
  double bound;
  double sigma_sq;
  double modulus;
};
FiniteTimeReport finite_time_check(const StationaryModel& model,
                                   const LinearFeatures& features,
                                   const WeightVector& w, double gamma,
                                   long T, int trials, std::uint64_t seed,
                                   long sigma_samples = 100000);

}  // namespace ctd
