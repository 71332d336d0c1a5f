#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ctd/weights.hpp"

namespace ctd {

// One sampled episode or rollout. rewards[i] is earned on the transition
// states[i] -> states[i+1]; if terminated, states.back() is terminal.
struct Trajectory {
  std::vector<int> states;
  std::vector<double> rewards;
  bool terminated = false;

  std::size_t transitions() const { return rewards.size(); }

  void check() const {
    if (states.empty() || rewards.size() + 1 != states.size())
      throw std::invalid_argument("trajectory needs len(rewards)+1 states");
  }
};

// Maps a state id to its current value estimate; terminal states are worth 0
// (the return computations enforce this at episode ends regardless of v).
using StateValuator = std::function<double(int)>;

template <typename V>
concept Valuator = std::invocable<const V&, int> &&
                   std::convertible_to<std::invoke_result_t<const V&, int>,
                                       double>;

namespace detail {

// Left-to-right accumulation of sum_{i<m} gamma^i R_{t+1+i}. Every caller
// shares this exact operation order so that degenerate weighted averages
// reproduce the plain n-step arithmetic bit for bit.
struct ReturnScan {
  const Trajectory& traj;
  std::size_t t;
  double gamma;
  double acc = 0.0;   // discounted reward prefix
  double power = 1.0; // gamma^steps
  std::size_t steps = 0;

  void advance_to(std::size_t m) {
    while (steps < m) {
      acc += power * traj.rewards[t + steps];
      power *= gamma;
      ++steps;
    }
  }

  // n-step value given n <= remaining steps: bootstrap unless the
  // trajectory ends here at a terminal state.
  double value(std::size_t m, const auto& v) {
    advance_to(m);
    const std::size_t idx = t + m;
    if (traj.terminated && idx + 1 == traj.states.size())
      return acc;
    return acc + power * static_cast<double>(v(traj.states[idx]));
  }
};

}  // namespace detail

// n-step return from time t: sum of up to n discounted rewards plus a
// discounted bootstrap. Truncates at the trajectory end; a terminal end
// contributes zero bootstrap no matter what v says.
template <Valuator V>
double nstep_return(const Trajectory& traj, std::size_t t, int n, double gamma,
                    const V& v) {
  traj.check();
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (t >= traj.transitions())
    throw std::out_of_range("t is past the last transition");
  const std::size_t rem = traj.transitions() - t;
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(n), rem);
  detail::ReturnScan scan{traj, t, gamma};
  return scan.value(m, v);
}

// Weighted average sum_n c_n G^(n) from time t. Lengths past the trajectory
// end all truncate to the same value, so their mass is applied in one step.
template <Valuator V>
double compound_return(const Trajectory& traj, std::size_t t,
                       const WeightVector& w, double gamma, const V& v) {
  traj.check();
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (t >= traj.transitions())
    throw std::out_of_range("t is past the last transition");
  const std::size_t rem = traj.transitions() - t;
  detail::ReturnScan scan{traj, t, gamma};
  double total = 0.0;
  double mass_used = 0.0;
  std::size_t k = 0;
  const auto& entries = w.entries();
  for (; k < entries.size(); ++k) {
    const auto [n, c] = entries[k];
    if (static_cast<std::size_t>(n) >= rem) break;
    total += c * scan.value(static_cast<std::size_t>(n), v);
    mass_used += c;
  }
  if (k < entries.size()) {
    // Remaining weight sits on lengths >= rem, which all share one value.
    total += (1.0 - mass_used) * scan.value(rem, v);
  }
  return total;
}

// One-step TD errors delta_i = R_{i+1} + gamma v(S_{i+1}) - v(S_i) for every
// transition; a terminal successor contributes value 0.
template <Valuator V>
std::vector<double> td_errors(const Trajectory& traj, double gamma,
                              const V& v) {
  traj.check();
  if (traj.transitions() == 0)
    throw std::invalid_argument("trajectory has no transitions");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  std::vector<double> deltas(traj.transitions());
  for (std::size_t i = 0; i < traj.transitions(); ++i) {
    const bool next_terminal =
        traj.terminated && i + 2 == traj.states.size();
    const double next_value =
        next_terminal ? 0.0 : static_cast<double>(v(traj.states[i + 1]));
    deltas[i] = traj.rewards[i] + gamma * next_value -
                static_cast<double>(v(traj.states[i]));
  }
  return deltas;
}

}  // namespace ctd
