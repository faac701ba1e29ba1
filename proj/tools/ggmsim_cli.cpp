// Command-line driver for the ensemble experiments.
//
//   ggmsim run      --experiment ggm-growth --layout brick --profile paper --out results/brick
//   ggmsim fit      --in results/brick.summary.csv --out results/brick.fit.csv
//   ggmsim match-dmin --ru results/brick.summary.csv --rmps results/rmps.summary.csv
//   ggmsim scaling  --experiment ggm-growth --n-list 4,6,8,10,12 --out results/scaling

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ggmsim/ggmsim.hpp"
#include "ggmsim/harness.hpp"

namespace {

using namespace ggmsim;

struct RunFlags {
  std::string config_path;
  std::optional<std::string> experiment, layout, profile, out, metrics, flavor, d_grid, lambda_grid, mode, n_list;
  std::optional<int> n, t_max, realizations, workers, decimals, trials, t_equil, max_part_size;
  std::optional<std::uint64_t> seed;
  bool resume = false;
  bool quiet = false;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config_path, "INI config file; flags given on the command line take precedence");
  app->add_option("--experiment", f.experiment, "ggm-growth|clifford-compare|rmps-sweep|ipr-growth|weak-sweep");
  app->add_option("--layout", f.layout, "brick|star|allpairs|clifford");
  app->add_option("--n", f.n, "number of qubits");
  app->add_option("--t-max", f.t_max, "circuit iterations");
  app->add_option("--realizations", f.realizations, "ensemble size");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--workers", f.workers, "worker threads (GGMSIM_WORKERS overrides)");
  app->add_option("--out", f.out, "output prefix: writes <out>.rows.csv and <out>.summary.csv");
  app->add_option("--profile", f.profile, "ci (N=8, 50 realizations) or paper (N=12, 200 realizations)");
  app->add_option("--metrics", f.metrics, "comma list of ggm,ipr");
  app->add_option("--decimals", f.decimals, "GGM saturation rounding");
  app->add_option("--flavor", f.flavor, "rmps slices: unitary|ginibre");
  app->add_option("--d-grid", f.d_grid, "comma list of bond dimensions");
  app->add_option("--lambda-grid", f.lambda_grid, "comma list of measurement strengths");
  app->add_option("--trials", f.trials, "weak measurements per realization");
  app->add_option("--mode", f.mode, "weak measurement mode: independent|sequential");
  app->add_option("--t-equil", f.t_equil, "iterations before weak measurements");
  app->add_option("--max-part-size", f.max_part_size, "restrict GGM cuts (profiling only; 0 = all)");
  app->add_flag("--resume", f.resume, "keep complete realizations from an existing rows file");
  app->add_flag("--quiet", f.quiet, "no progress output");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const RunFlags& f) {
  ExperimentConfig c;
  if (!f.config_path.empty()) c = parse_config(slurp(f.config_path), c);
  if (f.profile) apply_profile(c, *f.profile);
  if (f.experiment) c.kind = parse_experiment_kind(*f.experiment);
  if (f.layout) c.layout = parse_layout(*f.layout);
  if (f.n) c.num_qubits = *f.n;
  if (f.n_list) c.n_list = parse_int_list(*f.n_list);
  if (f.t_max) c.t_max = *f.t_max;
  if (f.realizations) c.realizations = *f.realizations;
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.out) c.out = *f.out;
  if (f.metrics) c.metrics = detail::split_list(*f.metrics);
  if (f.decimals) c.decimals = *f.decimals;
  if (f.flavor) c.rmps_flavor = parse_flavor(*f.flavor);
  if (f.d_grid) c.d_grid = parse_int_list(*f.d_grid);
  if (f.lambda_grid) c.lambda_grid = parse_double_list(*f.lambda_grid);
  if (f.trials) c.weak_trials = *f.trials;
  if (f.mode) c.weak_mode = parse_weak_mode(*f.mode);
  if (f.t_equil) c.weak_t_equil = *f.t_equil;
  if (f.max_part_size) c.max_part_size = *f.max_part_size;
  validate(c);
  return c;
}

RunOptions run_options(const RunFlags& f) {
  RunOptions o;
  o.resume = f.resume;
  if (!f.quiet) {
    o.progress = [](int done, int total) {
      std::fprintf(stderr, "\r%d/%d realizations", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  }
  return o;
}

void report_saturation(const ExperimentConfig& cfg, const std::vector<SummaryRow>& summary) {
  std::vector<std::string> names;
  for (const auto& r : summary)
    if (std::find(names.begin(), names.end(), r.metric) == names.end()) names.push_back(r.metric);
  for (const auto& name : names) {
    const MetricSeries s = series_for(summary, name);
    if (s.size() < 10) continue;
    const auto rule = saturation_rule(cfg, name);
    const Saturation sat = detect_saturation(s, rule.decimals, rule.scale);
    if (sat.saturated) {
      std::printf("%s: saturates at %s from abscissa %s\n", name.c_str(), format_double(sat.value).c_str(),
                  format_double(sat.abscissa).c_str());
    } else {
      std::printf("%s: no saturation at this rounding (tail mean rounds to %s)\n", name.c_str(),
                  format_double(sat.value).c_str());
    }
  }
}

int cmd_run(const RunFlags& f) {
  const ExperimentConfig cfg = build_config(f);
  if (cfg.kind == ExperimentKind::Fit || cfg.kind == ExperimentKind::Scaling) {
    throw ConfigError("use the '" + to_string(cfg.kind) + "' subcommand for this experiment");
  }
  const RunOutput out = run_experiment(cfg, run_options(f));
  if (cfg.out.empty()) {
    std::cout << kSummaryHeader << '\n';
    for (const auto& r : out.summary) std::cout << format_summary(r);
  } else {
    const RunPaths p = output_paths(cfg.out);
    std::printf("wrote %s and %s\n", p.rows.c_str(), p.summary.c_str());
  }
  report_saturation(cfg, out.summary);
  return 0;
}

int cmd_scaling(const RunFlags& f) {
  ExperimentConfig cfg = build_config(f);
  if (f.experiment) cfg.scaling_experiment = cfg.kind;
  cfg.kind = ExperimentKind::Scaling;
  const auto table = scaling_sweep(cfg, run_options(f));
  std::cout << kScalingHeader << '\n';
  for (const auto& e : table) {
    std::cout << e.num_qubits << ',' << e.metric << ',' << format_double(e.saturation.value) << ','
              << format_double(e.saturation.abscissa) << ',' << (e.saturation.saturated ? 1 : 0) << '\n';
  }
  return 0;
}

struct FitFlags {
  std::string in, out, metric = "ggm";
  std::optional<double> sat;
  int decimals = 3;
};

int cmd_fit(const FitFlags& f) {
  const auto summary = read_summary_csv(f.in);
  const MetricSeries s = series_for(summary, f.metric);
  if (s.size() == 0) throw FormatError("no '" + f.metric + "' rows in " + f.in);
  double sat_value;
  if (f.sat) {
    sat_value = *f.sat;
  } else {
    const Saturation sat = detect_saturation(s, f.decimals);
    sat_value = sat.value;
    std::printf("G_sat = %s (t_sat = %s)\n", format_double(sat.value).c_str(),
                sat.saturated ? format_double(sat.abscissa).c_str() : "none");
  }
  const TanhFit fit = fit_tanh(s, sat_value);
  double max_delta = 0.0;
  for (double d : fit.residual) max_delta = std::max(max_delta, d);
  std::printf("t0 = %s, max delta = %s\n", format_double(fit.t0).c_str(), format_double(max_delta).c_str());
  std::string text = "t,value,ratio,tanh,delta\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    text += format_double(s.abscissa[i]) + ',' + format_double(s.mean[i]) + ',' +
            format_double(s.mean[i] / sat_value) + ',' + format_double(std::tanh(s.abscissa[i] / fit.t0)) + ',' +
            format_double(fit.residual[i]) + '\n';
  }
  if (f.out.empty())
    std::cout << text;
  else
    write_text_file(f.out, text);
  return 0;
}

struct MatchFlags {
  std::string ru, rmps, out, metric = "ggm";
  double tol = 1e-2;
};

int cmd_match(const MatchFlags& f) {
  const MetricSeries ru = series_for(read_summary_csv(f.ru), f.metric);
  const MetricSeries rmps = series_for(read_summary_csv(f.rmps), f.metric);
  const auto dmin = match_min_bond_dimension(ru.mean, rmps, f.tol);
  std::string text = "t,g_ru,d_min\n";
  for (std::size_t i = 0; i < ru.size(); ++i) {
    text += format_double(ru.abscissa[i]) + ',' + format_double(ru.mean[i]) + ',' +
            (dmin[i] ? std::to_string(*dmin[i]) : std::string("none")) + '\n';
  }
  if (f.out.empty())
    std::cout << text;
  else
    write_text_file(f.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement growth in random circuits: ensemble runs and analysis"};
  app.require_subcommand(1);

  RunFlags run_flags;
  add_run_flags(app.add_subcommand("run", "run one ensemble experiment"), run_flags);

  RunFlags scaling_flags;
  add_run_flags(app.add_subcommand("scaling", "saturation vs N over --n-list"), scaling_flags);
  app.get_subcommand("scaling")->add_option("--n-list", scaling_flags.n_list, "comma list of qubit counts");

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "fit G/G_sat ~ tanh(t/t0) to a summary CSV");
  fit->add_option("--in", fit_flags.in, "summary CSV")->required();
  fit->add_option("--out", fit_flags.out, "residual CSV (stdout if omitted)");
  fit->add_option("--metric", fit_flags.metric, "metric column to fit");
  fit->add_option("--sat", fit_flags.sat, "saturation value (detected if omitted)");
  fit->add_option("--decimals", fit_flags.decimals, "rounding for saturation detection");

  MatchFlags match_flags;
  auto* match = app.add_subcommand("match-dmin", "minimum RMPS bond dimension per circuit iteration");
  match->add_option("--ru", match_flags.ru, "circuit summary CSV (GGM vs t)")->required();
  match->add_option("--rmps", match_flags.rmps, "RMPS summary CSV (GGM vs D)")->required();
  match->add_option("--tol", match_flags.tol, "matching tolerance");
  match->add_option("--metric", match_flags.metric, "metric column");
  match->add_option("--out", match_flags.out, "output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_flags);
    if (app.got_subcommand("scaling")) return cmd_scaling(scaling_flags);
    if (app.got_subcommand("fit")) return cmd_fit(fit_flags);
    if (app.got_subcommand("match-dmin")) return cmd_match(match_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ggmsim: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
