// Command-line front end: estimator runs on data files, breakdown /
// deviation / bounds / efficiency experiment drivers, and report emission
// (CSV, JSON, SVG). Exit codes: 0 success, 1 error, 2 success with a
// validity-precondition warning.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustmean/robustmean.hpp"

namespace {

using namespace robustmean;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidityWarning = 2;

struct Options {
  std::string command;
  std::string estimator = "winsorized";
  double beta = 3.0;
  double alpha = 1.0;
  std::size_t k = 5;
  std::string partition = "contiguous";
  double epsilon = 0.1;  // trim fraction
  std::string dist = "gaussian";
  double dist_a = 0.0;
  double dist_b = 1.0;
  double dist_w = 0.0;
  std::size_t n = 1000;
  std::size_t trials = 1000;
  double eps = 0.0;       // contamination rate
  double eps_star = -1.0; // < 0 means "pick a default"
  double delta = 0.05;
  double magnitude = 1e6;
  double mu = 0.0;
  double sigma = 0.6744897501960817;   // MAD of N(0,1)
  double sigma_x = 1.0;
  double c1 = 2.5066282746310002;      // sqrt(2 pi) = 1 / f(median) for N(0,1)
  double c2 = 2.5066282746310002;
  double target = std::numeric_limits<double>::quiet_NaN();
  std::string input;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ROBUSTMEAN_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

EstimatorSpec build_estimator(const Options& opt) {
  EstimatorSpec spec;
  spec.kind = estimator_kind_from_name(opt.estimator);
  spec.winsorize.beta = opt.beta;
  spec.catoni.alpha = opt.alpha;
  spec.mom.k = opt.k;
  spec.mom.partition_rule = opt.partition == "seeded_shuffle"
                                ? PartitionRule::seeded_shuffle
                                : PartitionRule::contiguous;
  spec.trim.epsilon = opt.epsilon;
  return spec;
}

DistributionSpec build_distribution(const Options& opt) {
  if (opt.dist == "gaussian") return DistributionSpec::Gaussian(opt.dist_a, opt.dist_b);
  if (opt.dist == "student_t") return DistributionSpec::StudentT(opt.dist_a);
  if (opt.dist == "pareto") return DistributionSpec::Pareto(opt.dist_a, opt.dist_b);
  if (opt.dist == "lognormal") return DistributionSpec::Lognormal(opt.dist_a, opt.dist_b);
  if (opt.dist == "point_mass") return DistributionSpec::PointMass(opt.dist_a);
  if (opt.dist == "point_mass_mixture") {
    return DistributionSpec::PointMassMixture(opt.dist_a, opt.dist_b, opt.dist_w);
  }
  throw std::invalid_argument("unknown distribution: " + opt.dist);
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opt.out);
  out << text;
}

// One ASCII decimal per line; '#' starts a comment line.
std::vector<double> read_data_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(begin, end - begin + 1);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != token.size() || !std::isfinite(value)) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": cannot parse '" + token + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) throw std::runtime_error("input file has no data: " + path);
  return values;
}

int cmd_estimate(const Options& opt) {
  const EstimatorSpec spec = build_estimator(opt);
  const Sample sample{read_data_file(opt.input)};
  std::ostringstream text;
  text << "estimator: " << spec.name();
  switch (spec.kind) {
    case EstimatorKind::winsorized: text << " (beta=" << opt.beta << ")"; break;
    case EstimatorKind::catoni: text << " (alpha=" << opt.alpha << ")"; break;
    case EstimatorKind::mom: text << " (k=" << opt.k << ", " << opt.partition << ")"; break;
    case EstimatorKind::lm_trimmed: text << " (epsilon=" << opt.epsilon << ")"; break;
    default: break;
  }
  text << "\nn: " << sample.size() << '\n';
  if (spec.kind == EstimatorKind::winsorized) {
    const WinsorizedDetail d = winsorized_mean_detail(sample, spec.winsorize);
    text << "estimate: " << d.estimate << '\n'
         << "median: " << d.median << '\n'
         << "mad: " << d.mad << '\n'
         << "lower: " << d.lower << '\n'
         << "upper: " << d.upper << '\n'
         << "clipped_low: " << d.clipped_low << '\n'
         << "clipped_high: " << d.clipped_high << '\n';
  } else if (spec.kind == EstimatorKind::lm_trimmed) {
    // Single input file: the same data serves as both samples.
    text << "estimate: " << lm_trimmed_mean(sample, sample, spec.trim) << '\n';
  } else {
    text << "estimate: " << estimate(spec, sample, opt.seed) << '\n';
  }
  write_output(opt, text.str());
  return kExitOk;
}

int cmd_breakdown(const Options& opt) {
  std::vector<EstimatorSpec> specs;
  if (opt.estimator == "all") {
    specs = {EstimatorSpec::Mean(), EstimatorSpec::Median(),
             EstimatorSpec::Winsorized(opt.beta), EstimatorSpec::Catoni(opt.alpha),
             EstimatorSpec::Mom(opt.k), EstimatorSpec::LmTrimmed(opt.epsilon)};
  } else {
    specs = {build_estimator(opt)};
  }
  std::vector<BreakdownReport> reports;
  reports.reserve(specs.size());
  for (const auto& spec : specs) reports.push_back(empirical_rbp(spec, opt.n, opt.seed));

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_header("breakdown", opt.seed);
    csv << "estimator,n,empirical_rbp,theoretical_rbp,upper_bound,monotone\n";
    for (const auto& r : reports) {
      csv << r.estimator << ',' << r.n << ',' << r.empirical_rbp.num << '/'
          << r.empirical_rbp.den << ',' << r.theoretical_rbp.num << '/'
          << r.theoretical_rbp.den << ',' << (r.theoretical_is_upper_bound ? 1 : 0) << ','
          << (r.monotone ? 1 : 0) << '\n';
    }
    write_output(opt, csv.str());
  } else {
    write_output(opt, json(reports).dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_deviation(const Options& opt) {
  const EstimatorSpec spec = build_estimator(opt);
  const DistributionSpec dist = build_distribution(opt);
  std::optional<double> target;
  if (!std::isnan(opt.target)) target = opt.target;
  const DeviationReport report = deviation_experiment(
      spec, dist, opt.n, opt.trials, opt.eps, ContaminationStrategy::point_mass,
      opt.magnitude, opt.delta, opt.seed, opt.threads, target);
  if (opt.format == "csv") {
    write_output(opt, to_csv(report));
  } else if (opt.format == "svg") {
    write_output(opt, tail_svg(report, tail_fit(report)));
  } else {
    write_output(opt, json(report).dump(2) + "\n");
  }
  return report.eps_n_fractional ? kExitValidityWarning : kExitOk;
}

int cmd_bounds(const Options& opt) {
  BoundParams params;
  params.n = opt.n;
  params.delta = opt.delta;
  params.eps = opt.eps;
  params.beta = opt.beta;
  params.mu = opt.mu;
  params.sigma = opt.sigma;
  params.sigma_x = opt.sigma_x;
  params.c1 = opt.c1;
  params.c2 = opt.c2;
  if (opt.eps_star >= 0.0) {
    params.eps_star = opt.eps_star;
  } else if (opt.eps == 0.0) {
    params.eps_star = 0.0;
  } else {
    // Default: scan [2 eps, 0.5) for the eps* minimizing the bound subject
    // to validity; fall back to the smallest admissible value 2 eps.
    params.eps_star = 2.0 * opt.eps;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      BoundParams trial = params;
      trial.eps_star = 2.0 * opt.eps + (0.4999 - 2.0 * opt.eps) * i / 199.0;
      if (trial.eps_star >= 0.5) break;
      if (!check_validity(trial).valid) continue;
      const double value = theorem41_bound(trial).value;
      if (value < best) {
        best = value;
        params.eps_star = trial.eps_star;
      }
    }
  }
  const BoundReport report = evaluate_bounds(params);
  if (opt.format == "csv") {
    write_output(opt, to_csv(report, opt.seed));
  } else {
    write_output(opt, json(report).dump(2) + "\n");
  }
  return report.valid ? kExitOk : kExitValidityWarning;
}

int cmd_efficiency(const Options& opt) {
  const DistributionSpec dist = build_distribution(opt);
  std::vector<EstimatorSpec> specs;
  std::stringstream names(opt.estimator == "all"
                              ? std::string("median,winsorized,catoni,mom,lm_trimmed")
                              : opt.estimator);
  std::string name;
  while (std::getline(names, name, ',')) {
    Options one = opt;
    one.estimator = name;
    specs.push_back(build_estimator(one));
  }
  const EfficiencyReport report =
      efficiency_comparison(dist, opt.n, opt.trials, specs, opt.seed, opt.threads);
  if (opt.format == "csv") {
    write_output(opt, to_csv(report));
  } else {
    write_output(opt, json(report).dump(2) + "\n");
  }
  return kExitOk;
}

// Re-renders a stored deviation report as CSV or SVG.
int cmd_report(const Options& opt) {
  std::ifstream in(opt.input);
  if (!in) throw std::runtime_error("cannot open input file: " + opt.input);
  json j;
  in >> j;
  const auto report = j.get<DeviationReport>();
  if (opt.format == "svg") {
    write_output(opt, tail_svg(report, tail_fit(report)));
  } else if (opt.format == "csv") {
    write_output(opt, to_csv(report));
  } else {
    write_output(opt, j.dump(2) + "\n");
  }
  return kExitOk;
}

int dispatch(const Options& opt) {
  if (opt.command == "estimate") return cmd_estimate(opt);
  if (opt.command == "breakdown") return cmd_breakdown(opt);
  if (opt.command == "deviation") return cmd_deviation(opt);
  if (opt.command == "bounds") return cmd_bounds(opt);
  if (opt.command == "efficiency") return cmd_efficiency(opt);
  if (opt.command == "report") return cmd_report(opt);
  throw std::invalid_argument("unknown command: " + opt.command);
}

// JSON config schema, version 1. Unknown fields are rejected, not ignored,
// so typos in tuning parameters surface immediately.
Options load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw std::runtime_error("config: missing or unsupported \"schema\" (expected 1)");
  }
  static const std::vector<std::string> known{
      "schema",  "command", "estimator", "beta",   "alpha",    "k",
      "partition", "epsilon", "dist",    "dist_a", "dist_b",   "dist_w",
      "n",       "trials",  "eps",       "eps_star", "delta",  "magnitude",
      "mu",      "sigma",   "sigma_x",   "c1",     "c2",       "target",
      "input",   "out",     "format",    "seed",   "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::runtime_error("config: unknown field \"" + key + "\"");
    }
  }
  Options opt;
  opt.seed = default_seed();
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("command", opt.command);
  get("estimator", opt.estimator);
  get("beta", opt.beta);
  get("alpha", opt.alpha);
  get("k", opt.k);
  get("partition", opt.partition);
  get("epsilon", opt.epsilon);
  get("dist", opt.dist);
  get("dist_a", opt.dist_a);
  get("dist_b", opt.dist_b);
  get("dist_w", opt.dist_w);
  get("n", opt.n);
  get("trials", opt.trials);
  get("eps", opt.eps);
  get("eps_star", opt.eps_star);
  get("delta", opt.delta);
  get("magnitude", opt.magnitude);
  get("mu", opt.mu);
  get("sigma", opt.sigma);
  get("sigma_x", opt.sigma_x);
  get("c1", opt.c1);
  get("c2", opt.c2);
  get("target", opt.target);
  get("input", opt.input);
  get("out", opt.out);
  get("format", opt.format);
  get("seed", opt.seed);
  get("threads", opt.threads);
  if (opt.command.empty()) throw std::runtime_error("config: missing \"command\"");
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust-mean-lab: robust mean estimation and experiment harness"};
  app.require_subcommand(0, 1);

  Options opt;
  opt.seed = default_seed();
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (schema 1)");

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--estimator", opt.estimator, "mean|median|winsorized|catoni|mom|lm_trimmed");
    cmd->add_option("--beta", opt.beta, "winsorizing cutoff");
    cmd->add_option("--alpha", opt.alpha, "Catoni tuning scale");
    cmd->add_option("--k", opt.k, "median-of-means group count");
    cmd->add_option("--partition", opt.partition, "contiguous|seeded_shuffle");
    cmd->add_option("--epsilon", opt.epsilon, "trim fraction");
    cmd->add_option("--seed", opt.seed, "RNG seed (default ROBUSTMEAN_SEED or 0)");
    cmd->add_option("--out", opt.out, "output path (default stdout)");
    cmd->add_option("--format", opt.format, "csv|json|svg");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = auto)");
  };
  const auto add_dist = [&](CLI::App* cmd) {
    cmd->add_option("--dist", opt.dist,
                    "gaussian|student_t|pareto|lognormal|point_mass|point_mass_mixture");
    cmd->add_option("--dist-a", opt.dist_a, "first family parameter");
    cmd->add_option("--dist-b", opt.dist_b, "second family parameter");
    cmd->add_option("--dist-w", opt.dist_w, "mixture weight");
  };

  auto* estimate_cmd = app.add_subcommand("estimate", "run an estimator on a data file");
  estimate_cmd->add_option("--input", opt.input, "data file, one number per line")->required();
  add_common(estimate_cmd);

  auto* breakdown_cmd = app.add_subcommand("breakdown", "empirical breakdown-point scan");
  breakdown_cmd->add_option("--n", opt.n, "sample size");
  add_common(breakdown_cmd);

  auto* deviation_cmd = app.add_subcommand("deviation", "Monte Carlo deviation tails");
  deviation_cmd->add_option("--n", opt.n, "sample size");
  deviation_cmd->add_option("--trials", opt.trials, "Monte Carlo trials");
  deviation_cmd->add_option("--eps", opt.eps, "contamination rate");
  deviation_cmd->add_option("--magnitude", opt.magnitude, "contamination magnitude");
  deviation_cmd->add_option("--delta", opt.delta, "failure probability");
  deviation_cmd->add_option("--target", opt.target, "deviation target override");
  add_common(deviation_cmd);
  add_dist(deviation_cmd);

  auto* bounds_cmd = app.add_subcommand("bounds", "deviation-bound calculator");
  bounds_cmd->add_option("--n", opt.n, "sample size");
  bounds_cmd->add_option("--eps", opt.eps, "contamination rate");
  bounds_cmd->add_option("--eps-star", opt.eps_star, "slack (default: optimized)");
  bounds_cmd->add_option("--delta", opt.delta, "failure probability");
  bounds_cmd->add_option("--mu", opt.mu, "population median");
  bounds_cmd->add_option("--sigma", opt.sigma, "population MAD");
  bounds_cmd->add_option("--sigma-x", opt.sigma_x, "population standard deviation");
  bounds_cmd->add_option("--c1", opt.c1, "quantile Lipschitz constant (median)");
  bounds_cmd->add_option("--c2", opt.c2, "quantile Lipschitz constant (MAD)");
  add_common(bounds_cmd);

  auto* efficiency_cmd = app.add_subcommand("efficiency", "empirical standard errors");
  efficiency_cmd->add_option("--n", opt.n, "sample size");
  efficiency_cmd->add_option("--trials", opt.trials, "Monte Carlo trials");
  add_common(efficiency_cmd);
  add_dist(efficiency_cmd);

  auto* report_cmd = app.add_subcommand("report", "re-render a stored deviation report");
  report_cmd->add_option("--input", opt.input, "JSON deviation report")->required();
  add_common(report_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      return dispatch(load_config(config_path));
    }
    if (estimate_cmd->parsed()) opt.command = "estimate";
    else if (breakdown_cmd->parsed()) opt.command = "breakdown";
    else if (deviation_cmd->parsed()) opt.command = "deviation";
    else if (bounds_cmd->parsed()) opt.command = "bounds";
    else if (efficiency_cmd->parsed()) opt.command = "efficiency";
    else if (report_cmd->parsed()) opt.command = "report";
    else {
      std::cerr << app.help();
      return kExitError;
    }
    return dispatch(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
