#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

#include "ctd/mrp.hpp"
#include "ctd/rng.hpp"
#include "ctd/variance.hpp"

using namespace ctd;

namespace {

double bellman_residual(const TabularMRP& mrp, double gamma,
                        const std::vector<double>& v) {
  const auto rbar = mrp.mean_rewards();
  double worst = 0.0;
  for (int s = 0; s < mrp.n_states; ++s) {
    if (mrp.is_terminal(s)) continue;
    double backed_up = rbar[static_cast<std::size_t>(s)];
    for (int s2 = 0; s2 < mrp.n_states; ++s2)
      backed_up += gamma * mrp.transition[s][s2] * v[static_cast<std::size_t>(s2)];
    worst = std::max(worst, std::abs(backed_up - v[static_cast<std::size_t>(s)]));
  }
  return worst;
}

std::vector<double> value_iteration(const TabularMRP& mrp, double gamma) {
  const auto rbar = mrp.mean_rewards();
  std::vector<double> v(static_cast<std::size_t>(mrp.n_states), 0.0);
  for (int sweep = 0; sweep < 2000000; ++sweep) {
    double delta = 0.0;
    for (int s = 0; s < mrp.n_states; ++s) {
      if (mrp.is_terminal(s)) continue;
      double next = rbar[static_cast<std::size_t>(s)];
      for (int s2 = 0; s2 < mrp.n_states; ++s2)
        next += gamma * mrp.transition[s][s2] * v[static_cast<std::size_t>(s2)];
      delta = std::max(delta, std::abs(next - v[static_cast<std::size_t>(s)]));
      v[static_cast<std::size_t>(s)] = next;
    }
    if (delta < 1e-13) break;
  }
  return v;
}

TabularMRP two_state_chain() {
  TabularMRP mrp;
  mrp.n_states = 2;
  mrp.transition = {{0.5, 0.5}, {0.5, 0.5}};
  mrp.expected_reward = {{0.0, 0.0}, {0.0, 0.0}};
  mrp.start_dist = {1.0, 0.0};
  mrp.check();
  return mrp;
}

}  // namespace

TEST_SUITE("mrp") {

TEST_CASE("random walk values are the linear ramp") {
  const TabularMRP mrp = random_walk_19();
  CHECK(mrp.n_states == 21);
  CHECK(mrp.start_dist[10] == 1.0);
  const auto v = exact_values(mrp, 1.0);
  for (int i = 1; i <= 19; ++i)
    CHECK(v[static_cast<std::size_t>(i)] ==
          doctest::Approx(i / 10.0 - 1.0).epsilon(1e-12));
  CHECK(v[10] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(v[0] == 0.0);
  CHECK(v[20] == 0.0);
}

TEST_CASE("gridworld rows are stochastic and rewards sit on terminal entries") {
  for (const TabularMRP& mrp : {gridworld_4x3(), gridworld_10x8()}) {
    for (int s = 0; s < mrp.n_states; ++s) {
      const double sum = std::accumulate(mrp.transition[s].begin(),
                                         mrp.transition[s].end(), 0.0);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(gridworld_4x3().n_states == 11);   // 12 cells minus one wall
  CHECK(gridworld_10x8().n_states == 79);  // 80 cells minus one wall
  CHECK(gridworld_4x3().terminal.size() == 2);
}

TEST_CASE("10x8 gridworld has a single rewarding transition") {
  const TabularMRP mrp = gridworld_10x8();
  int nonzero = 0;
  for (int s = 0; s < mrp.n_states; ++s)
    for (int s2 = 0; s2 < mrp.n_states; ++s2)
      if (mrp.expected_reward[s][s2] != 0.0) ++nonzero;
  CHECK(nonzero == 1);

  const auto v = exact_values(mrp, 0.99);
  for (int s = 0; s < mrp.n_states; ++s)
    if (!mrp.is_terminal(s)) CHECK(v[static_cast<std::size_t>(s)] > 0.0);

  SUBCASE("linear solve agrees with value iteration") {
    const auto vi = value_iteration(mrp, 0.99);
    for (int s = 0; s < mrp.n_states; ++s)
      CHECK(v[static_cast<std::size_t>(s)] ==
            doctest::Approx(vi[static_cast<std::size_t>(s)])
                .scale(1.0)
                .epsilon(1e-10));
  }
}

TEST_CASE("exact value edge cases") {
  SUBCASE("zero rewards give zero values") {
    TabularMRP mrp = two_state_chain();
    const auto v = exact_values(mrp, 0.9);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("single-state self-loop is the geometric series") {
    TabularMRP mrp;
    mrp.n_states = 1;
    mrp.transition = {{1.0}};
    mrp.expected_reward = {{1.0}};
    mrp.start_dist = {1.0};
    const auto v = exact_values(mrp, 0.5);
    CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("undiscounted ergodic chains are rejected") {
    CHECK_THROWS_AS(exact_values(two_state_chain(), 1.0), std::runtime_error);
  }
}

TEST_CASE("bellman residual of exact values") {
  CHECK(bellman_residual(random_walk_19(), 1.0,
                         exact_values(random_walk_19(), 1.0)) < 1e-10);
  CHECK(bellman_residual(gridworld_4x3(), 1.0,
                         exact_values(gridworld_4x3(), 1.0)) < 1e-10);
  CHECK(bellman_residual(gridworld_10x8(), 0.99,
                         exact_values(gridworld_10x8(), 0.99)) < 1e-10);
}

TEST_CASE("episode sampling") {
  const TabularMRP mrp = random_walk_19();
  SUBCASE("same seed gives the identical trajectory") {
    const Trajectory a = sample_episode(mrp, 321, 10000);
    const Trajectory b = sample_episode(mrp, 321, 10000);
    CHECK(a.states == b.states);
    CHECK(a.rewards == b.rewards);
    CHECK(a.terminated == b.terminated);
  }
  SUBCASE("terminated flag tracks the last state") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Trajectory traj = sample_episode(mrp, seed, 30);
      CHECK(traj.terminated == mrp.is_terminal(traj.states.back()));
      CHECK(traj.rewards.size() + 1 == traj.states.size());
      CHECK(traj.rewards.size() <= 30);
    }
  }
  SUBCASE("mean absorption time matches the linear-solve oracle") {
    // expected steps-to-termination = value function of the same chain
    // with every transition paying 1
    TabularMRP unit_cost = mrp;
    for (int s = 0; s < mrp.n_states; ++s) {
      if (unit_cost.is_terminal(s)) continue;
      for (int s2 = 0; s2 < mrp.n_states; ++s2)
        if (unit_cost.transition[s][s2] > 0.0)
          unit_cost.expected_reward[s][s2] = 1.0;
    }
    const double expected_steps = exact_values(unit_cost, 1.0)[10];
    CHECK(expected_steps == doctest::Approx(100.0).epsilon(1e-10));

    const int episodes = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < episodes; ++k) {
      const Trajectory traj = sample_episode(mrp, derive_seed(5, k), 100000);
      REQUIRE(traj.terminated);
      const double len = static_cast<double>(traj.transitions());
      sum += len;
      sum_sq += len * len;
    }
    const double mean = sum / episodes;
    const double se =
        std::sqrt((sum_sq / episodes - mean * mean) / (episodes - 1));
    CHECK(std::abs(mean - expected_steps) < 3.0 * se);
  }
}

TEST_CASE("visit distribution") {
  SUBCASE("symmetric two-state chain") {
    const StationaryModel model = visit_distribution(two_state_chain());
    CHECK(model.d[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.d[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("sums to one over non-terminal states") {
    for (const TabularMRP& mrp : {random_walk_19(), gridworld_4x3()}) {
      const StationaryModel model = visit_distribution(mrp);
      double sum = 0.0;
      for (int s = 0; s < mrp.n_states; ++s) {
        if (mrp.is_terminal(s))
          CHECK(model.d[static_cast<std::size_t>(s)] == 0.0);
        sum += model.d[static_cast<std::size_t>(s)];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("matches long-run empirical frequencies") {
    TabularMRP mrp;
    mrp.n_states = 3;
    mrp.transition = {{0.2, 0.5, 0.3}, {0.4, 0.1, 0.5}, {0.25, 0.25, 0.5}};
    mrp.expected_reward.assign(3, std::vector<double>(3, 0.0));
    mrp.start_dist = {1.0, 0.0, 0.0};
    const StationaryModel model = visit_distribution(mrp);
    Rng rng(8);
    std::vector<double> counts(3, 0.0);
    int s = 0;
    const int steps = 1000000;
    for (int k = 0; k < steps; ++k) {
      s = rng.categorical(mrp.transition[s]);
      counts[static_cast<std::size_t>(s)] += 1.0;
    }
    for (int i = 0; i < 3; ++i)
      CHECK(counts[static_cast<std::size_t>(i)] / steps ==
            doctest::Approx(model.d[static_cast<std::size_t>(i)])
                .scale(1.0)
                .epsilon(1e-3));
  }
  SUBCASE("unreachable states are reported") {
    TabularMRP mrp;
    mrp.n_states = 3;
    mrp.transition = {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}};
    mrp.expected_reward.assign(3, std::vector<double>(3, 0.0));
    mrp.start_dist = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(visit_distribution(mrp), std::runtime_error);
  }
}

TEST_CASE("text serialization") {
  SUBCASE("golden file for a small chain") {
    TabularMRP mrp;
    mrp.n_states = 2;
    mrp.transition = {{0.25, 0.75}, {0.0, 1.0}};
    mrp.expected_reward = {{0.0, 1.0}, {0.0, 0.0}};
    mrp.terminal = {1};
    mrp.start_dist = {1.0, 0.0};
    const std::string golden =
        "mrp 1\n"
        "states 2\n"
        "terminal 1\n"
        "start 0 1\n"
        "edge 0 0 0.25 0\n"
        "edge 0 1 0.75 1\n"
        "edge 1 1 1 0\n";
    CHECK(to_text(mrp) == golden);
  }
  SUBCASE("round trip over the benchmark environments") {
    for (const TabularMRP& mrp :
         {random_walk_19(), gridworld_4x3(), gridworld_10x8()}) {
      const TabularMRP parsed = mrp_from_text(to_text(mrp));
      CHECK(parsed.n_states == mrp.n_states);
      CHECK(parsed.terminal == mrp.terminal);
      CHECK(parsed.start_dist == mrp.start_dist);
      CHECK(parsed.transition == mrp.transition);
      CHECK(parsed.expected_reward == mrp.expected_reward);
    }
  }
  SUBCASE("bad headers are rejected") {
    CHECK_THROWS_AS(mrp_from_text("mdp 1\nstates 2\n"), std::runtime_error);
    CHECK_THROWS_AS(mrp_from_text("mrp 2\nstates 2\n"), std::runtime_error);
  }
}

TEST_CASE("construction validation") {
  TabularMRP mrp = two_state_chain();
  mrp.transition[0][0] = 0.7;  // row no longer sums to 1
  CHECK_THROWS_AS(mrp.check(), std::invalid_argument);
}

}  // TEST_SUITE
