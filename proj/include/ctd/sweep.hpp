#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctd/mrp.hpp"
#include "ctd/weights.hpp"

namespace ctd {

// A return estimator named on the command line / in config files:
//   nstep:N | lambda:L | pilar:N | weights:N1=C1,N2=C2,...
struct EstimatorSpec {
  enum class Kind { NStep, Lambda, Pilar, Custom };

  Kind kind = Kind::NStep;
  int n = 1;                     // nstep length or pilar target
  double lambda = 0.0;           // lambda-return parameter
  std::map<int, double> custom;  // explicit weights

  static EstimatorSpec parse(const std::string& text);
  std::string label() const;

  // Materializes the weight vector; lambda-returns truncate at `horizon`
  // with residual mass on the longest return.
  WeightVector weights(double gamma, int horizon) const;

  bool operator==(const EstimatorSpec&) const = default;
};

// Random-walk sweep configuration. Defaults reproduce the desk-scale
// experiment: 100 trials of 10 episodes, 25 step sizes uniform on [0, 1].
struct SweepConfig {
  std::vector<EstimatorSpec> estimators;
  std::vector<double> alphas;
  int episodes = 10;
  int trials = 100;
  std::uint64_t seed = 1;
  double gamma = 1.0;
  int max_steps = 10000;  // episode cap; also the lambda horizon
  int workers = 0;        // 0 = auto

  static SweepConfig defaults();
  void check() const;

  bool operator==(const SweepConfig&) const = default;
};

// Key-value config file support ("key = value" lines, # comments). Applies
// onto the given config so flags and files can layer; format/parse
// round-trips losslessly.
void apply_config_text(SweepConfig& config, const std::string& text);
std::string format_config(const SweepConfig& config);

// "lo:hi:count" for a uniform grid or a comma-separated list.
std::vector<double> parse_alpha_grid(const std::string& text);

struct SweepRow {
  std::string estimator;
  double alpha;
  double mean_rms;
  double ci_half_width;  // 1.96 * sample SD / sqrt(trials)
  int trials;
  std::vector<double> trial_metrics;  // per-trial means, not serialized
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Runs the random-walk prediction sweep: per trial, fresh zero values and
// `episodes` offline backups; the metric is the RMS value error over the
// chain states measured after each episode, averaged over episodes. All
// estimators and step sizes share the same episode streams.
SweepResult run_random_walk_sweep(const SweepConfig& config);

std::string sweep_csv(const SweepResult& result);

struct VarianceRow {
  int n;
  double empirical;
  double model_rho0;
  double model_rho1;
  double standard_error;  // Monte Carlo SE of the empirical variance
};

struct VarianceStudy {
  std::vector<VarianceRow> rows;
  double kappa;  // sampled Var[delta_0 | S_0]
};

// Per-environment n-step return variances from the initial state against
// the rho = 0 / rho = 1 model bounds, using v_pi for the TD errors and
// kappa = Var[delta_0 | S_0].
VarianceStudy run_variance_study(const std::string& env, int n_max,
                                 int episodes, std::uint64_t seed,
                                 int workers);

std::string variance_csv(const VarianceStudy& study);

// Environments by CLI name: rw19, grid4x3, grid10x8.
TabularMRP environment_by_name(const std::string& name);
double environment_gamma(const std::string& name);

// Reference tables as CSV text.
std::string com_pairs_csv();
std::string pilar_csv(double gamma, const std::vector<double>& targets);

// Writes com_pairs.csv, pilar_reference.csv and minatar_pilars.csv.
void emit_tables(double gamma, const std::string& out_dir);

}  // namespace ctd
