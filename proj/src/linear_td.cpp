#include "ctd/linear_td.hpp"

#include <cmath>
#include <stdexcept>

#include "ctd/pairing.hpp"
#include "ctd/parallel.hpp"
#include "ctd/rng.hpp"

namespace ctd {

namespace {

// Rollout from a fixed root state (the i.i.d. state model samples the root
// separately from the stationary distribution).
Trajectory rollout_from(const TabularMRP& mrp, int root, int steps, Rng& rng) {
  Trajectory traj;
  traj.states.push_back(root);
  int s = root;
  for (int i = 0; i < steps && !mrp.is_terminal(s); ++i) {
    const int s2 = rng.categorical(mrp.transition[s]);
    traj.rewards.push_back(mrp.expected_reward[s][s2]);
    traj.states.push_back(s2);
    s = s2;
  }
  traj.terminated = mrp.is_terminal(s);
  return traj;
}

void check_distribution(const TabularMRP& mrp, const std::vector<double>& d) {
  if (static_cast<int>(d.size()) != mrp.n_states)
    throw std::invalid_argument("distribution size must match n_states");
  double sum = 0.0;
  for (int s = 0; s < mrp.n_states; ++s) {
    if (d[s] < 0.0) throw std::invalid_argument("distribution must be >= 0");
    if (mrp.is_terminal(s) && d[s] != 0.0)
      throw std::invalid_argument("distribution must vanish at terminals");
    sum += d[s];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("distribution must sum to 1");
}

double weighted_sq_norm(const Eigen::VectorXd& x,
                        const std::vector<double>& d) {
  double total = 0.0;
  for (int s = 0; s < x.size(); ++s) total += d[static_cast<std::size_t>(s)] * x(s) * x(s);
  return total;
}

}  // namespace

void LinearFeatures::check(const TabularMRP& mrp) const {
  if (phi.rows() != mrp.n_states)
    throw std::invalid_argument("features need one row per state");
  if (phi.cols() < 1) throw std::invalid_argument("features need >= 1 column");
  for (int s = 0; s < mrp.n_states; ++s) {
    if (phi.row(s).squaredNorm() > 1.0 + 1e-12)
      throw std::invalid_argument("feature rows must satisfy |phi|^2 <= 1");
    if (mrp.is_terminal(s) && phi.row(s).squaredNorm() != 0.0)
      throw std::invalid_argument("terminal states must have zero features");
  }
}

LinearFeatures one_hot_features(const TabularMRP& mrp) {
  int live = 0;
  for (int s = 0; s < mrp.n_states; ++s)
    if (!mrp.is_terminal(s)) ++live;
  LinearFeatures features;
  features.phi = Eigen::MatrixXd::Zero(mrp.n_states, live);
  int col = 0;
  for (int s = 0; s < mrp.n_states; ++s)
    if (!mrp.is_terminal(s)) features.phi(s, col++) = 1.0;
  return features;
}

void offline_episode_backup(std::vector<double>& values, const Trajectory& traj,
                            const WeightVector& w, double gamma, double alpha) {
  traj.check();
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must be in [0, 1]");
  const std::vector<double> snapshot = values;
  const auto frozen = [&snapshot](int s) {
    return snapshot[static_cast<std::size_t>(s)];
  };
  std::vector<double> targets(traj.transitions());
  for (std::size_t t = 0; t < traj.transitions(); ++t)
    targets[t] = compound_return(traj, t, w, gamma, frozen);
  // Increments follow once every target exists; a state revisited within
  // the episode is pulled toward each of its targets in turn.
  for (std::size_t t = 0; t < traj.transitions(); ++t) {
    const std::size_t s = static_cast<std::size_t>(traj.states[t]);
    values[s] += alpha * (targets[t] - values[s]);
  }
}

Parameters linear_td_step(const Parameters& theta,
                          const LinearFeatures& features,
                          const Trajectory& rollout, const WeightVector& w,
                          double gamma, double alpha) {
  rollout.check();
  const auto v = [&](int s) { return features.value(s, theta); };
  const double target = compound_return(rollout, 0, w, gamma, v);
  const double scale = alpha * (target - features.value(rollout.states[0], theta));
  Parameters out = theta;
  out += scale * features.phi.row(rollout.states[0]).transpose();
  return out;
}

Parameters compound_fixed_point(const TabularMRP& mrp,
                                const LinearFeatures& features,
                                const std::vector<double>& d,
                                const WeightVector& w, double gamma) {
  mrp.check();
  features.check(mrp);
  check_distribution(mrp, d);
  if (contraction_modulus(w, gamma) >= 1.0)
    throw std::invalid_argument("fixed point needs contraction modulus < 1");
  const int n = mrp.n_states;

  Eigen::MatrixXd gp(n, n);
  for (int s = 0; s < n; ++s)
    for (int s2 = 0; s2 < n; ++s2) gp(s, s2) = gamma * mrp.transition[s][s2];
  const std::vector<double> rbar_vec = mrp.mean_rewards();
  Eigen::VectorXd rbar(n);
  for (int s = 0; s < n; ++s) rbar(s) = rbar_vec[static_cast<std::size_t>(s)];

  // Walk (gamma P)^k once; pick up the weighted operator and reward terms
  // at each supported length.
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd reward_prefix = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd weighted_op = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd weighted_rewards = Eigen::VectorXd::Zero(n);
  auto entry = w.entries().begin();
  for (int k = 1; k <= w.max_length(); ++k) {
    reward_prefix += power * rbar;
    power = gp * power;
    if (entry != w.entries().end() && entry->first == k) {
      weighted_op += entry->second * power;
      weighted_rewards += entry->second * reward_prefix;
      ++entry;
    }
  }

  Eigen::VectorXd dvec(n);
  for (int s = 0; s < n; ++s) dvec(s) = d[static_cast<std::size_t>(s)];
  const Eigen::MatrixXd weighted_phi = dvec.asDiagonal() * features.phi;
  const Eigen::MatrixXd a =
      features.phi.transpose() *
      (dvec.asDiagonal() * (features.phi - weighted_op * features.phi));
  const Eigen::VectorXd b = weighted_phi.transpose() * weighted_rewards;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw std::runtime_error("projected Bellman system is singular "
                             "(rank-deficient features?)");
  return lu.solve(b);
}

QualityGap solution_quality_gap(const TabularMRP& mrp,
                                const LinearFeatures& features,
                                const std::vector<double>& d,
                                const WeightVector& w, double gamma) {
  const Parameters theta = compound_fixed_point(mrp, features, d, w, gamma);
  const std::vector<double> v_pi = exact_values(mrp, gamma);
  const int n = mrp.n_states;
  Eigen::VectorXd v(n);
  for (int s = 0; s < n; ++s) v(s) = v_pi[static_cast<std::size_t>(s)];

  Eigen::VectorXd dvec(n);
  for (int s = 0; s < n; ++s) dvec(s) = d[static_cast<std::size_t>(s)];
  // D-weighted projection of v_pi onto the feature span.
  const Eigen::MatrixXd gram =
      features.phi.transpose() * dvec.asDiagonal() * features.phi;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw std::runtime_error("feature Gram matrix is singular");
  const Eigen::VectorXd proj_coef =
      lu.solve(features.phi.transpose() * (dvec.asDiagonal() * v));

  const double beta = contraction_modulus(w, gamma);
  QualityGap gap;
  gap.lhs = std::sqrt(weighted_sq_norm(features.phi * theta - v, d));
  gap.rhs = std::sqrt(weighted_sq_norm(features.phi * proj_coef - v, d)) /
            (1.0 - beta);
  return gap;
}

FiniteTimeReport finite_time_check(const StationaryModel& model,
                                   const LinearFeatures& features,
                                   const WeightVector& w, double gamma,
                                   long T, int trials, std::uint64_t seed,
                                   long sigma_samples) {
  const TabularMRP& mrp = model.mrp;
  mrp.check();
  features.check(mrp);
  check_distribution(mrp, model.d);
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const double beta = contraction_modulus(w, gamma);
  if (beta >= 1.0)
    throw std::invalid_argument("finite-time bound needs modulus < 1");
  const double min_T = std::pow(4.0 / (1.0 - beta), 2.0);
  if (static_cast<double>(T) < min_T)
    throw std::invalid_argument("T must be at least (4/(1-beta))^2");

  const Parameters theta_star =
      compound_fixed_point(mrp, features, model.d, w, gamma);

  double reward_max = 0.0;
  for (int s = 0; s < mrp.n_states; ++s) {
    if (mrp.is_terminal(s)) continue;
    for (int s2 = 0; s2 < mrp.n_states; ++s2)
      if (mrp.transition[s][s2] > 0.0)
        reward_max = std::max(reward_max, std::abs(mrp.expected_reward[s][s2]));
  }
  const double c_const =
      (reward_max + (1.0 + gamma) * theta_star.lpNorm<Eigen::Infinity>()) /
      (1.0 - gamma);

  // sigma^2: d-weighted conditional variance of the compound error at the
  // fixed point, estimated per root state.
  const int steps = w.max_length();
  const auto v_star = [&](int s) { return features.value(s, theta_star); };
  double sigma_sq = 0.0;
  for (int s = 0; s < mrp.n_states; ++s) {
    const double mass = model.d[static_cast<std::size_t>(s)];
    if (mass <= 0.0) continue;
    const long draws = std::max<long>(
        1000, std::lround(static_cast<double>(sigma_samples) * mass));
    Rng rng(derive_seed(seed, 0x5151'0000ULL + static_cast<std::uint64_t>(s)));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long k = 0; k < draws; ++k) {
      const Trajectory traj = rollout_from(mrp, s, steps, rng);
      const double err = compound_return(traj, 0, w, gamma, v_star) -
                         features.value(s, theta_star);
      sum += err;
      sum_sq += err * err;
    }
    const double mean = sum / static_cast<double>(draws);
    const double var =
        (sum_sq - static_cast<double>(draws) * mean * mean) /
        static_cast<double>(draws - 1);
    sigma_sq += mass * std::max(var, 0.0);
  }

  // Averaged-iterate runs from theta_0 = 0.
  const double alpha = 1.0 / std::sqrt(static_cast<double>(T));
  std::vector<double> trial_errors(static_cast<std::size_t>(trials), 0.0);
  parallel_for(trials, resolve_workers(0), [&](int trial) {
    Rng rng(derive_seed(seed, 0x7172'0000ULL + static_cast<std::uint64_t>(trial)));
    Parameters theta = Parameters::Zero(features.dim());
    Parameters average = Parameters::Zero(features.dim());
    for (long t = 0; t < T; ++t) {
      average += theta;
      const int root = rng.categorical(model.d);
      const Trajectory traj = rollout_from(mrp, root, steps, rng);
      theta = linear_td_step(theta, features, traj, w, gamma, alpha);
    }
    average /= static_cast<double>(T);
    trial_errors[static_cast<std::size_t>(trial)] = weighted_sq_norm(
        features.phi * (theta_star - average), model.d);
  });
  double empirical = 0.0;
  for (double e : trial_errors) empirical += e;
  empirical /= static_cast<double>(trials);

  FiniteTimeReport report;
  report.modulus = beta;
  report.sigma_sq = sigma_sq;
  report.empirical = empirical;
  report.bound = (theta_star.squaredNorm() + 2.0 * (1.0 - beta) * (1.0 - beta) *
                                                 c_const * c_const +
                  2.0 * sigma_sq) /
                 ((1.0 - beta) * std::sqrt(static_cast<double>(T)));
  return report;
}

}  // namespace ctd
