#include "ctd/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "ctd/csv.hpp"
#include "ctd/linear_td.hpp"
#include "ctd/pairing.hpp"
#include "ctd/parallel.hpp"
#include "ctd/pilar.hpp"
#include "ctd/rng.hpp"
#include "ctd/variance.hpp"

namespace ctd {

namespace {

// Shortest representation that parses back to the same double.
std::string exact_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size())
    throw std::invalid_argument("bad number: '" + text + "'");
  return value;
}

long parse_long(const std::string& text) {
  std::size_t used = 0;
  const long value = std::stol(text, &used);
  if (used != text.size())
    throw std::invalid_argument("bad integer: '" + text + "'");
  return value;
}

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

}  // namespace

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : text.substr(colon + 1);
  EstimatorSpec spec;
  if (kind == "nstep") {
    spec.kind = Kind::NStep;
    spec.n = static_cast<int>(parse_long(arg));
  } else if (kind == "lambda") {
    spec.kind = Kind::Lambda;
    spec.lambda = parse_double(arg);
  } else if (kind == "pilar") {
    spec.kind = Kind::Pilar;
    spec.n = static_cast<int>(parse_long(arg));
  } else if (kind == "weights") {
    spec.kind = Kind::Custom;
    std::istringstream in(arg);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("weights need n=c pairs: '" + item + "'");
      spec.custom[static_cast<int>(parse_long(item.substr(0, eq)))] =
          parse_double(item.substr(eq + 1));
    }
    if (spec.custom.empty())
      throw std::invalid_argument("weights estimator needs entries");
  } else {
    throw std::invalid_argument("unknown estimator kind: '" + kind + "'");
  }
  return spec;
}

std::string EstimatorSpec::label() const {
  switch (kind) {
    case Kind::NStep:
      return "nstep:" + std::to_string(n);
    case Kind::Lambda:
      return "lambda:" + exact_double(lambda);
    case Kind::Pilar:
      return "pilar:" + std::to_string(n);
    case Kind::Custom: {
      std::string out = "weights:";
      bool first = true;
      for (const auto& [len, c] : custom) {
        if (!first) out += ',';
        out += std::to_string(len) + "=" + exact_double(c);
        first = false;
      }
      return out;
    }
  }
  return "";
}

WeightVector EstimatorSpec::weights(double gamma, int horizon) const {
  switch (kind) {
    case Kind::NStep:
      return WeightVector::nstep(n);
    case Kind::Lambda:
      return WeightVector::lambda(lambda, horizon);
    case Kind::Pilar:
      return pilar_search(static_cast<double>(n), gamma).weights();
    case Kind::Custom:
      return WeightVector::from_entries(custom);
  }
  throw std::logic_error("unreachable estimator kind");
}

SweepConfig SweepConfig::defaults() {
  SweepConfig config;
  config.alphas = parse_alpha_grid("0:1:25");
  return config;
}

void SweepConfig::check() const {
  if (estimators.empty())
    throw std::invalid_argument("config needs at least one estimator");
  if (alphas.empty()) throw std::invalid_argument("config needs a step-size grid");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("step sizes must lie in [0, 1]");
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    std::string lo_s, hi_s, count_s;
    if (!std::getline(in, lo_s, ':') || !std::getline(in, hi_s, ':') ||
        !std::getline(in, count_s))
      throw std::invalid_argument("alpha grid must be lo:hi:count");
    const double lo = parse_double(lo_s);
    const double hi = parse_double(hi_s);
    const long count = parse_long(count_s);
    if (count < 1 || hi < lo)
      throw std::invalid_argument("alpha grid must be lo:hi:count");
    for (long i = 0; i < count; ++i)
      grid.push_back(count == 1 ? lo
                                : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(count - 1));
  } else {
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) grid.push_back(parse_double(item));
  }
  if (grid.empty()) throw std::invalid_argument("empty alpha grid");
  return grid;
}

void apply_config_text(SweepConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "estimators") {
      config.estimators.clear();
      std::istringstream items(value);
      std::string item;
      while (items >> item) config.estimators.push_back(EstimatorSpec::parse(item));
    } else if (key == "alphas") {
      config.alphas = parse_alpha_grid(value);
    } else if (key == "episodes") {
      config.episodes = static_cast<int>(parse_long(value));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_long(value));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "gamma") {
      config.gamma = parse_double(value);
    } else if (key == "max_steps") {
      config.max_steps = static_cast<int>(parse_long(value));
    } else if (key == "workers") {
      config.workers = static_cast<int>(parse_long(value));
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
}

std::string format_config(const SweepConfig& config) {
  std::ostringstream out;
  out << "estimators =";
  for (const auto& spec : config.estimators) out << ' ' << spec.label();
  out << "\nalphas = ";
  for (std::size_t i = 0; i < config.alphas.size(); ++i) {
    if (i) out << ',';
    out << exact_double(config.alphas[i]);
  }
  out << "\nepisodes = " << config.episodes;
  out << "\ntrials = " << config.trials;
  out << "\nseed = " << config.seed;
  out << "\ngamma = " << exact_double(config.gamma);
  out << "\nmax_steps = " << config.max_steps;
  out << "\nworkers = " << config.workers;
  out << "\n";
  return out.str();
}

SweepResult run_random_walk_sweep(const SweepConfig& config) {
  config.check();
  const TabularMRP mrp = random_walk_19();
  const std::vector<double> v_pi = exact_values(mrp, config.gamma);
  std::vector<int> chain;
  for (int s = 0; s < mrp.n_states; ++s)
    if (!mrp.is_terminal(s)) chain.push_back(s);

  std::vector<WeightVector> weights;
  weights.reserve(config.estimators.size());
  for (const auto& spec : config.estimators)
    weights.push_back(spec.weights(config.gamma, config.max_steps));

  const std::size_t n_est = config.estimators.size();
  const std::size_t n_alpha = config.alphas.size();
  // metrics[est][alpha][trial]
  std::vector<std::vector<std::vector<double>>> metrics(
      n_est, std::vector<std::vector<double>>(
                 n_alpha, std::vector<double>(
                              static_cast<std::size_t>(config.trials), 0.0)));

  parallel_for(config.trials, resolve_workers(config.workers), [&](int trial) {
    // One shared episode stream per trial: every estimator and step size
    // sees the same data, so comparisons are paired.
    std::vector<Trajectory> episodes;
    episodes.reserve(static_cast<std::size_t>(config.episodes));
    for (int e = 0; e < config.episodes; ++e) {
      const std::uint64_t stream =
          static_cast<std::uint64_t>(trial) *
              static_cast<std::uint64_t>(config.episodes) +
          static_cast<std::uint64_t>(e);
      episodes.push_back(
          sample_episode(mrp, derive_seed(config.seed, stream),
                         config.max_steps));
    }
    std::vector<double> values(static_cast<std::size_t>(mrp.n_states));
    for (std::size_t est = 0; est < n_est; ++est) {
      for (std::size_t ai = 0; ai < n_alpha; ++ai) {
        std::fill(values.begin(), values.end(), 0.0);
        double rms_sum = 0.0;
        for (const Trajectory& episode : episodes) {
          offline_episode_backup(values, episode, weights[est], config.gamma,
                                 config.alphas[ai]);
          double sq = 0.0;
          for (int s : chain) {
            const double err = values[static_cast<std::size_t>(s)] -
                               v_pi[static_cast<std::size_t>(s)];
            sq += err * err;
          }
          rms_sum += std::sqrt(sq / static_cast<double>(chain.size()));
        }
        metrics[est][ai][static_cast<std::size_t>(trial)] =
            rms_sum / static_cast<double>(config.episodes);
      }
    }
  });

  SweepResult result;
  for (std::size_t est = 0; est < n_est; ++est) {
    for (std::size_t ai = 0; ai < n_alpha; ++ai) {
      const std::vector<double>& samples = metrics[est][ai];
      double mean = 0.0;
      for (double m : samples) mean += m;
      mean /= static_cast<double>(samples.size());
      double var = 0.0;
      for (double m : samples) var += (m - mean) * (m - mean);
      var = samples.size() > 1
                ? var / static_cast<double>(samples.size() - 1)
                : 0.0;
      SweepRow row;
      row.estimator = config.estimators[est].label();
      row.alpha = config.alphas[ai];
      row.mean_rms = mean;
      row.ci_half_width =
          1.96 * std::sqrt(var / static_cast<double>(samples.size()));
      row.trials = config.trials;
      row.trial_metrics = samples;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  CsvTable table;
  table.header = {"estimator", "alpha", "mean_rms", "ci_half_width", "trials"};
  for (const auto& row : result.rows)
    table.rows.push_back({row.estimator, csv_double(row.alpha),
                          csv_double(row.mean_rms),
                          csv_double(row.ci_half_width),
                          std::to_string(row.trials)});
  return to_csv(table);
}

TabularMRP environment_by_name(const std::string& name) {
  if (name == "rw19") return random_walk_19();
  if (name == "grid4x3") return gridworld_4x3();
  if (name == "grid10x8") return gridworld_10x8();
  throw std::invalid_argument("unknown environment '" + name +
                              "' (expected rw19, grid4x3 or grid10x8)");
}

double environment_gamma(const std::string& name) {
  if (name == "rw19" || name == "grid4x3") return 1.0;
  if (name == "grid10x8") return 0.99;
  throw std::invalid_argument("unknown environment '" + name + "'");
}

VarianceStudy run_variance_study(const std::string& env, int n_max,
                                 int episodes, std::uint64_t seed,
                                 int workers) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (episodes < 2) throw std::invalid_argument("episodes must be >= 2");
  const TabularMRP mrp = environment_by_name(env);
  const double gamma = environment_gamma(env);
  const std::vector<double> v_pi = exact_values(mrp, gamma);
  const auto v = [&v_pi](int s) { return v_pi[static_cast<std::size_t>(s)]; };

  // returns[k] holds G^(1..n_max) for episode k; the last slot is delta_0.
  const std::size_t cols = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> samples(static_cast<std::size_t>(episodes) * cols);
  parallel_for(episodes, resolve_workers(workers), [&](int k) {
    const Trajectory traj =
        sample_episode(mrp, derive_seed(seed, static_cast<std::uint64_t>(k)),
                       n_max);
    double* row = samples.data() + static_cast<std::size_t>(k) * cols;
    for (int n = 1; n <= n_max; ++n)
      row[n - 1] = nstep_return(traj, 0, n, gamma, v);
    row[cols - 1] = td_errors(traj, gamma, v)[0];
  });

  const auto column_stats = [&](std::size_t col) {
    double mean = 0.0;
    for (int k = 0; k < episodes; ++k)
      mean += samples[static_cast<std::size_t>(k) * cols + col];
    mean /= static_cast<double>(episodes);
    double m2 = 0.0, m4 = 0.0;
    for (int k = 0; k < episodes; ++k) {
      const double dev =
          samples[static_cast<std::size_t>(k) * cols + col] - mean;
      m2 += dev * dev;
      m4 += dev * dev * dev * dev;
    }
    const double variance = m2 / static_cast<double>(episodes - 1);
    m2 /= static_cast<double>(episodes);
    m4 /= static_cast<double>(episodes);
    // Large-sample SE of a sample variance via the fourth central moment.
    const double se =
        std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(episodes));
    return std::pair<double, double>{variance, se};
  };

  VarianceStudy study;
  study.kappa = column_stats(cols - 1).first;
  for (int n = 1; n <= n_max; ++n) {
    const auto [variance, se] = column_stats(static_cast<std::size_t>(n - 1));
    VarianceRow row;
    row.n = n;
    row.empirical = variance;
    row.model_rho0 = nstep_variance(n, {study.kappa, 0.0, gamma});
    row.model_rho1 = nstep_variance(n, {study.kappa, 1.0, gamma});
    row.standard_error = se;
    study.rows.push_back(row);
  }
  return study;
}

std::string variance_csv(const VarianceStudy& study) {
  CsvTable table;
  table.header = {"n", "empirical_variance", "model_rho0", "model_rho1",
                  "standard_error"};
  for (const auto& row : study.rows)
    table.rows.push_back({std::to_string(row.n), csv_double(row.empirical),
                          csv_double(row.model_rho0),
                          csv_double(row.model_rho1),
                          csv_double(row.standard_error)});
  return to_csv(table);
}

std::string com_pairs_csv() {
  CsvTable table;
  table.header = {"n", "lambda"};
  for (const auto& [n, lambda] : com_pair_table())
    table.rows.push_back({std::to_string(n), csv_double(lambda)});
  return to_csv(table);
}

std::string pilar_csv(double gamma, const std::vector<double>& targets) {
  CsvTable table;
  table.header = {"n", "n1", "n2", "c", "error"};
  const auto rows = pilar_table(gamma, targets);
  for (std::size_t i = 0; i < rows.size(); ++i)
    table.rows.push_back({csv_double(targets[i]), std::to_string(rows[i].n1),
                          std::to_string(rows[i].n2), csv_double(rows[i].c),
                          csv_double(rows[i].error)});
  return to_csv(table);
}

void emit_tables(double gamma, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file((dir / "com_pairs.csv").string(), com_pairs_csv());
  write_file((dir / "pilar_reference.csv").string(),
             pilar_csv(gamma, {2, 3, 4, 5, 10, 20, 25, 50, 100}));
  write_file((dir / "minatar_pilars.csv").string(), pilar_csv(gamma, {3, 5}));
}

}  // namespace ctd
