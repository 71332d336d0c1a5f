#include "ctd/mrp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ctd/rng.hpp"

namespace ctd {

namespace {

constexpr double kRowTolerance = 1e-12;

// Grid helpers shared by both gridworlds. Cells are (x, y) with y growing
// upward; blocked cells are not states.
struct GridSpec {
  int width;
  int height;
  std::vector<std::pair<int, int>> walls;
  std::vector<std::pair<int, int>> terminals;
  std::vector<double> terminal_rewards;  // reward on entering terminals[i]
  std::pair<int, int> start;
};

TabularMRP build_gridworld(const GridSpec& spec) {
  const auto blocked = [&](int x, int y) {
    for (const auto& [wx, wy] : spec.walls)
      if (wx == x && wy == y) return true;
    return x < 0 || x >= spec.width || y < 0 || y >= spec.height;
  };

  // Dense state ids over non-blocked cells, row-major from the bottom.
  std::vector<std::vector<int>> id(spec.width,
                                   std::vector<int>(spec.height, -1));
  int n = 0;
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x)
      if (!blocked(x, y)) id[x][y] = n++;

  TabularMRP mrp;
  mrp.n_states = n;
  mrp.transition.assign(n, std::vector<double>(n, 0.0));
  mrp.expected_reward.assign(n, std::vector<double>(n, 0.0));
  mrp.start_dist.assign(n, 0.0);
  mrp.start_dist[id[spec.start.first][spec.start.second]] = 1.0;

  std::vector<double> enter_reward(n, 0.0);
  for (std::size_t i = 0; i < spec.terminals.size(); ++i) {
    const auto& [tx, ty] = spec.terminals[i];
    mrp.terminal.insert(id[tx][ty]);
    enter_reward[id[tx][ty]] = spec.terminal_rewards[i];
  }

  // Intended moves: up, down, left, right. A slip rotates 90 degrees.
  const int dx[4] = {0, 0, -1, 1};
  const int dy[4] = {1, -1, 0, 0};
  const int perp[4][2] = {{2, 3}, {2, 3}, {0, 1}, {0, 1}};

  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (blocked(x, y)) continue;
      const int s = id[x][y];
      if (mrp.is_terminal(s)) {
        mrp.transition[s][s] = 1.0;  // absorbing, zero reward
        continue;
      }
      const auto land = [&](int a) {
        const int nx = x + dx[a];
        const int ny = y + dy[a];
        return blocked(nx, ny) ? s : id[nx][ny];
      };
      for (int a = 0; a < 4; ++a) {  // uniform-random policy
        mrp.transition[s][land(a)] += 0.25 * 0.8;
        mrp.transition[s][land(perp[a][0])] += 0.25 * 0.1;
        mrp.transition[s][land(perp[a][1])] += 0.25 * 0.1;
      }
      for (int s2 = 0; s2 < n; ++s2)
        if (mrp.transition[s][s2] > 0.0)
          mrp.expected_reward[s][s2] = enter_reward[s2];
    }
  }
  mrp.check();
  return mrp;
}

}  // namespace

void TabularMRP::check() const {
  const auto square = [&](const std::vector<std::vector<double>>& m) {
    if (static_cast<int>(m.size()) != n_states) return false;
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != n_states) return false;
    return true;
  };
  if (n_states < 1) throw std::invalid_argument("MRP needs >= 1 state");
  if (!square(transition) || !square(expected_reward))
    throw std::invalid_argument("MRP matrices must be n_states x n_states");
  if (static_cast<int>(start_dist.size()) != n_states)
    throw std::invalid_argument("start_dist must have n_states entries");
  double start_sum = 0.0;
  for (double p : start_dist) {
    if (p < 0.0) throw std::invalid_argument("start_dist must be >= 0");
    start_sum += p;
  }
  if (std::abs(start_sum - 1.0) > kRowTolerance)
    throw std::invalid_argument("start_dist must sum to 1");
  for (int s = 0; s < n_states; ++s) {
    double row_sum = 0.0;
    for (int s2 = 0; s2 < n_states; ++s2) {
      if (transition[s][s2] < 0.0)
        throw std::invalid_argument("transition probabilities must be >= 0");
      row_sum += transition[s][s2];
    }
    if (std::abs(row_sum - 1.0) > kRowTolerance)
      throw std::invalid_argument("transition rows must sum to 1");
    if (is_terminal(s)) {
      if (transition[s][s] != 1.0)
        throw std::invalid_argument("terminal states must self-absorb");
      for (int s2 = 0; s2 < n_states; ++s2)
        if (expected_reward[s][s2] != 0.0)
          throw std::invalid_argument("terminal states must earn no reward");
    }
  }
}

std::vector<double> TabularMRP::mean_rewards() const {
  std::vector<double> r(n_states, 0.0);
  for (int s = 0; s < n_states; ++s) {
    if (is_terminal(s)) continue;
    for (int s2 = 0; s2 < n_states; ++s2)
      r[s] += transition[s][s2] * expected_reward[s][s2];
  }
  return r;
}

TabularMRP random_walk_19() {
  constexpr int kChain = 19;
  TabularMRP mrp;
  mrp.n_states = kChain + 2;  // 0 and 20 are terminal
  mrp.transition.assign(mrp.n_states, std::vector<double>(mrp.n_states, 0.0));
  mrp.expected_reward.assign(mrp.n_states,
                             std::vector<double>(mrp.n_states, 0.0));
  mrp.terminal = {0, kChain + 1};
  mrp.start_dist.assign(mrp.n_states, 0.0);
  mrp.start_dist[(kChain + 1) / 2] = 1.0;  // center = state 10
  mrp.transition[0][0] = 1.0;
  mrp.transition[kChain + 1][kChain + 1] = 1.0;
  for (int s = 1; s <= kChain; ++s) {
    mrp.transition[s][s - 1] = 0.5;
    mrp.transition[s][s + 1] = 0.5;
  }
  mrp.expected_reward[1][0] = -1.0;
  mrp.expected_reward[kChain][kChain + 1] = 1.0;
  mrp.check();
  return mrp;
}

TabularMRP gridworld_4x3() {
  GridSpec spec;
  spec.width = 4;
  spec.height = 3;
  spec.walls = {{1, 1}};
  spec.terminals = {{3, 2}, {3, 1}};
  spec.terminal_rewards = {1.0, -1.0};
  spec.start = {0, 0};
  return build_gridworld(spec);
}

TabularMRP gridworld_10x8() {
  GridSpec spec;
  spec.width = 10;
  spec.height = 8;
  // The wall next to the goal makes (8,6)->(9,7) the only rewarding
  // transition, keeping the reward matrix single-entry sparse.
  spec.walls = {{8, 7}};
  spec.terminals = {{9, 7}};
  spec.terminal_rewards = {1.0};
  spec.start = {1, 4};  // left side, vertically centered
  return build_gridworld(spec);
}

std::vector<double> exact_values(const TabularMRP& mrp, double gamma) {
  mrp.check();
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  std::vector<int> live;
  for (int s = 0; s < mrp.n_states; ++s)
    if (!mrp.is_terminal(s)) live.push_back(s);
  const int m = static_cast<int>(live.size());
  std::vector<double> values(mrp.n_states, 0.0);
  if (m == 0) return values;

  const std::vector<double> rbar = mrp.mean_rewards();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b(i) = rbar[live[i]];
    for (int j = 0; j < m; ++j)
      a(i, j) -= gamma * mrp.transition[live[i]][live[j]];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "value equation is singular (non-episodic chain at gamma = 1?)");
  const Eigen::VectorXd v = lu.solve(b);
  for (int i = 0; i < m; ++i) values[live[i]] = v(i);
  return values;
}

Trajectory sample_episode(const TabularMRP& mrp, std::uint64_t seed,
                          int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  Rng rng(seed);
  Trajectory traj;
  int s = rng.categorical(mrp.start_dist);
  traj.states.push_back(s);
  for (int step = 0; step < max_steps && !mrp.is_terminal(s); ++step) {
    const int s2 = rng.categorical(mrp.transition[s]);
    traj.rewards.push_back(mrp.expected_reward[s][s2]);
    traj.states.push_back(s2);
    s = s2;
  }
  traj.terminated = mrp.is_terminal(traj.states.back());
  return traj;
}

StationaryModel visit_distribution(const TabularMRP& mrp) {
  mrp.check();
  const int n = mrp.n_states;
  // Restart-augmented chain: terminal rows resample the start distribution.
  Eigen::MatrixXd p(n, n);
  for (int s = 0; s < n; ++s)
    for (int s2 = 0; s2 < n; ++s2)
      p(s, s2) = mrp.is_terminal(s) ? mrp.start_dist[s2]
                                    : mrp.transition[s][s2];

  // Left fixed point d^T P = d^T with sum(d) = 1, as a linear system.
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible())
    throw std::runtime_error("chain is reducible: no unique stationary "
                             "distribution");
  Eigen::VectorXd d = lu.solve(b);

  StationaryModel model{mrp, std::vector<double>(n, 0.0)};
  double live_mass = 0.0;
  for (int s = 0; s < n; ++s) {
    if (d(s) < -1e-10)
      throw std::runtime_error("chain is reducible: negative stationary mass");
    if (!mrp.is_terminal(s)) live_mass += std::max(d(s), 0.0);
  }
  for (int s = 0; s < n; ++s) {
    if (mrp.is_terminal(s)) continue;
    const double mass = std::max(d(s), 0.0) / live_mass;
    if (mass <= 0.0)
      throw std::runtime_error("chain is reducible: unreachable state");
    model.d[s] = mass;
  }
  return model;
}

std::string to_text(const TabularMRP& mrp) {
  std::ostringstream out;
  char buf[64];
  const auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  out << "mrp 1\n";
  out << "states " << mrp.n_states << "\n";
  out << "terminal";
  for (int s : mrp.terminal) out << ' ' << s;
  out << "\n";
  for (int s = 0; s < mrp.n_states; ++s)
    if (mrp.start_dist[s] != 0.0)
      out << "start " << s << ' ' << num(mrp.start_dist[s]) << "\n";
  for (int s = 0; s < mrp.n_states; ++s)
    for (int s2 = 0; s2 < mrp.n_states; ++s2)
      if (mrp.transition[s][s2] != 0.0)
        out << "edge " << s << ' ' << s2 << ' ' << num(mrp.transition[s][s2])
            << ' ' << num(mrp.expected_reward[s][s2]) << "\n";
  return out.str();
}

TabularMRP mrp_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string keyword;
  int version = 0;
  if (!(in >> keyword >> version) || keyword != "mrp" || version != 1)
    throw std::runtime_error("unrecognized MRP header");
  TabularMRP mrp;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    fields >> keyword;
    if (keyword == "states") {
      if (!(fields >> mrp.n_states) || mrp.n_states < 1)
        throw std::runtime_error("bad states line");
      mrp.transition.assign(mrp.n_states,
                            std::vector<double>(mrp.n_states, 0.0));
      mrp.expected_reward.assign(mrp.n_states,
                                 std::vector<double>(mrp.n_states, 0.0));
      mrp.start_dist.assign(mrp.n_states, 0.0);
    } else if (keyword == "terminal") {
      int s;
      while (fields >> s) mrp.terminal.insert(s);
    } else if (keyword == "start") {
      int s;
      double prob;
      if (!(fields >> s >> prob)) throw std::runtime_error("bad start line");
      mrp.start_dist.at(s) = prob;
    } else if (keyword == "edge") {
      int s, s2;
      double prob, reward;
      if (!(fields >> s >> s2 >> prob >> reward))
        throw std::runtime_error("bad edge line");
      mrp.transition.at(s).at(s2) = prob;
      mrp.expected_reward.at(s).at(s2) = reward;
    } else {
      throw std::runtime_error("unknown MRP line: " + keyword);
    }
  }
  mrp.check();
  return mrp;
}

}  // namespace ctd
