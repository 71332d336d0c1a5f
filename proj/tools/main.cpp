#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "ctd/csv.hpp"
#include "ctd/plot.hpp"
#include "ctd/sweep.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Compound-return TD learning experiment harness"};
  app.require_subcommand(1);

  // --- sweep ---------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Random-walk prediction sweep over step sizes");
  std::string sweep_config_path;
  std::string sweep_env = "rw19";
  std::vector<std::string> estimator_args;
  std::string alphas_arg;
  int flag_n = 0;
  double flag_lambda = -1.0;
  double sweep_gamma = -1.0;
  int sweep_episodes = -1, sweep_trials = -1, sweep_workers = -1;
  std::int64_t sweep_seed = -1;
  std::string sweep_out;
  sweep->add_option("--config", sweep_config_path, "key = value config file");
  sweep->add_option("--env", sweep_env, "environment (rw19)");
  sweep->add_option("--estimator", estimator_args,
                    "estimator spec: nstep:N, lambda:L, pilar:N, "
                    "weights:N=C,...; bare kinds take --n / --lambda");
  sweep->add_option("--n", flag_n, "length for a bare nstep/pilar estimator");
  sweep->add_option("--lambda", flag_lambda,
                    "parameter for a bare lambda estimator");
  sweep->add_option("--gamma", sweep_gamma, "discount factor");
  sweep->add_option("--alphas", alphas_arg, "step-size grid lo:hi:count or list");
  sweep->add_option("--episodes", sweep_episodes, "episodes per trial");
  sweep->add_option("--trials", sweep_trials, "independent trials");
  sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--workers", sweep_workers, "worker threads (0 = auto)");
  sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

  // --- variance ------------------------------------------------------
  auto* variance = app.add_subcommand(
      "variance", "n-step return variance study from the initial state");
  std::string var_env;
  int var_n = 21, var_workers = 0;
  int var_episodes = 10000;
  std::uint64_t var_seed = 1;
  std::string var_out;
  variance->add_option("--env", var_env, "rw19, grid4x3 or grid10x8")
      ->required();
  variance->add_option("--n", var_n, "largest n-step length");
  variance->add_option("--episodes", var_episodes, "episodes to sample");
  variance->add_option("--seed", var_seed, "base seed");
  variance->add_option("--workers", var_workers, "worker threads (0 = auto)");
  variance->add_option("--out", var_out, "output CSV path (default stdout)");

  // --- tables --------------------------------------------------------
  auto* tables = app.add_subcommand(
      "tables", "write the COM-pair and two-bootstrap reference tables");
  double tables_gamma = 0.99;
  std::string tables_out = ".";
  tables->add_option("--gamma", tables_gamma, "discount for the pair tables");
  tables->add_option("--out", tables_out, "output directory");

  // --- pilar ---------------------------------------------------------
  auto* pilar = app.add_subcommand(
      "pilar", "two-bootstrap search table for target effective n-steps");
  std::vector<double> pilar_targets;
  double pilar_gamma = 0.99;
  std::string pilar_out;
  pilar->add_option("--n", pilar_targets,
                    "target effective n-steps (default reference set)");
  pilar->add_option("--gamma", pilar_gamma, "discount factor");
  pilar->add_option("--out", pilar_out, "output CSV path (default stdout)");

  // --- plot ----------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "render a results CSV as SVG");
  std::string plot_in, plot_out;
  plot->add_option("input", plot_in, "results CSV from sweep or variance")
      ->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  const auto emit = [](const std::string& text, const std::string& path) {
    if (path.empty())
      std::cout << text;
    else
      ctd::write_file(path, text);
  };

  if (sweep->parsed()) {
    if (sweep_env != "rw19")
      throw std::invalid_argument("sweep supports only --env rw19");
    ctd::SweepConfig config = ctd::SweepConfig::defaults();
    if (!sweep_config_path.empty())
      ctd::apply_config_text(config, ctd::read_file(sweep_config_path));
    for (const std::string& arg : estimator_args) {
      if (arg == "nstep" || arg == "pilar") {
        if (flag_n < 1)
          throw std::invalid_argument("bare --estimator " + arg +
                                      " needs --n");
        config.estimators.push_back(
            ctd::EstimatorSpec::parse(arg + ":" + std::to_string(flag_n)));
      } else if (arg == "lambda") {
        if (flag_lambda < 0.0)
          throw std::invalid_argument("bare --estimator lambda needs --lambda");
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", flag_lambda);
        config.estimators.push_back(
            ctd::EstimatorSpec::parse(std::string("lambda:") + buf));
      } else {
        config.estimators.push_back(ctd::EstimatorSpec::parse(arg));
      }
    }
    if (!alphas_arg.empty()) config.alphas = ctd::parse_alpha_grid(alphas_arg);
    if (sweep_gamma >= 0.0) config.gamma = sweep_gamma;
    if (sweep_episodes >= 0) config.episodes = sweep_episodes;
    if (sweep_trials >= 0) config.trials = sweep_trials;
    if (sweep_seed >= 0) config.seed = static_cast<std::uint64_t>(sweep_seed);
    if (sweep_workers >= 0) config.workers = sweep_workers;
    emit(ctd::sweep_csv(ctd::run_random_walk_sweep(config)), sweep_out);
  } else if (variance->parsed()) {
    emit(ctd::variance_csv(ctd::run_variance_study(var_env, var_n,
                                                   var_episodes, var_seed,
                                                   var_workers)),
         var_out);
  } else if (tables->parsed()) {
    ctd::emit_tables(tables_gamma, tables_out);
  } else if (pilar->parsed()) {
    if (pilar_targets.empty())
      pilar_targets = {2, 3, 4, 5, 10, 20, 25, 50, 100};
    emit(ctd::pilar_csv(pilar_gamma, pilar_targets), pilar_out);
  } else if (plot->parsed()) {
    ctd::plot_csv_file(plot_in, plot_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
