#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "ctd/returns.hpp"

namespace ctd {

// Finite Markov reward process: row-stochastic transitions over
// non-terminal rows, per-transition expected rewards, absorbing zero-reward
// terminal states, and a start distribution. Immutable in practice; check()
// validates the construction.
struct TabularMRP {
  int n_states = 0;
  std::vector<std::vector<double>> transition;       // n_states x n_states
  std::vector<std::vector<double>> expected_reward;  // n_states x n_states
  std::set<int> terminal;
  std::vector<double> start_dist;

  bool is_terminal(int s) const { return terminal.contains(s); }

  // Expected one-step reward from each state (zero at terminals).
  std::vector<double> mean_rewards() const;

  void check() const;
};

// An MRP together with a stationary / long-run visit distribution d.
struct StationaryModel {
  TabularMRP mrp;
  std::vector<double> d;
};

// The 19-state random walk: a linear chain with terminals at both ends,
// uniform left/right moves, -1 / +1 on reaching the left / right end, start
// at the center.
TabularMRP random_walk_19();

// 4x3 gridworld with a blocked cell and +1 / -1 terminal cells; moves
// succeed with probability 0.8 and slip perpendicular with 0.1 each; bumps
// stay in place. The uniform-random policy is folded into the MRP. Steps
// cost nothing (only the terminal transitions carry reward).
TabularMRP gridworld_4x3();

// 10x8 gridworld with a single +1 goal in the top-right corner and the same
// 80/10/10 slip dynamics under a uniform-random policy. A wall beside the
// goal leaves exactly one rewarding transition.
TabularMRP gridworld_10x8();

// Solves (I - gamma P) v = r_bar over non-terminal states; terminal values
// are 0. Throws on a singular system (non-episodic chain at gamma = 1).
std::vector<double> exact_values(const TabularMRP& mrp, double gamma);

// Rollout from the start distribution until a terminal state or max_steps,
// deterministic given the seed. terminated is set iff the last state is
// terminal.
Trajectory sample_episode(const TabularMRP& mrp, std::uint64_t seed,
                          int max_steps);

// Stationary distribution of the restart-augmented chain (terminal rows
// replaced by the start distribution), solved as the left fixed point of
// the transition matrix. Terminal mass is folded back onto the non-terminal
// states. Throws if some non-terminal state is unreachable (reducible
// chain).
StationaryModel visit_distribution(const TabularMRP& mrp);

// Versioned sparse text serialization, for golden files.
std::string to_text(const TabularMRP& mrp);
TabularMRP mrp_from_text(const std::string& text);

}  // namespace ctd
