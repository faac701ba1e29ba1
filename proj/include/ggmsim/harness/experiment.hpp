#pragma once

#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ggmsim/circuits.hpp"
#include "ggmsim/harness/config.hpp"
#include "ggmsim/harness/records.hpp"
#include "ggmsim/measurement.hpp"
#include "ggmsim/metrics.hpp"
#include "ggmsim/random.hpp"
#include "ggmsim/rmps.hpp"
#include "ggmsim/series.hpp"

namespace ggmsim {

/// Worker count after applying the GGMSIM_WORKERS environment override.
inline int effective_workers(int configured) {
  if (const char* env = std::getenv("GGMSIM_WORKERS"); env && *env) {
    const long long v = parse_integer(env);
    if (v < 1) throw ConfigError("GGMSIM_WORKERS must be >= 1");
    return static_cast<int>(v);
  }
  return configured;
}

/// Metric names recorded by an experiment.
inline std::vector<std::string> experiment_metrics(const ExperimentConfig& cfg) {
  if (!cfg.metrics.empty()) return cfg.metrics;
  if (cfg.kind == ExperimentKind::IprGrowth) return {"ipr"};
  return {"ggm"};
}

/// Rounding used to call saturation for a metric: GGM at `decimals` places,
/// IPR at two places in units of 10^3.
struct SaturationRule {
  int decimals;
  double scale;
};

inline SaturationRule saturation_rule(const ExperimentConfig& cfg, std::string_view metric) {
  if (metric.starts_with("ipr")) return {2, 1e-3};
  return {cfg.decimals, 1.0};
}

namespace detail {

inline double evaluate_metric(const std::string& name, const StateVector& s, const GgmOptions& opt) {
  if (name == "ggm") return ggm(s, opt);
  if (name == "ipr") return ipr(s);
  throw ConfigError("unknown metric '" + name + "'");
}

inline void circuit_rows(const ExperimentConfig& cfg, Layout layout, const std::string& suffix, RngStream& rng,
                         int realization, std::vector<RunRecord>& out) {
  const auto metrics = experiment_metrics(cfg);
  const GgmOptions opt{cfg.max_part_size, {}};
  StateVector state(cfg.num_qubits);
  evolve(state, layout, cfg.t_max, rng, [&](int t, const StateVector& s) {
    std::vector<double> vals;
    for (const auto& m : metrics) {
      const double v = evaluate_metric(m, s, opt);
      vals.push_back(v);
      out.push_back({double(t), m + suffix, realization, v});
    }
    return vals;
  });
}

}  // namespace detail

/// Rows produced by realization `r` of `cfg`, drawing from RngStream(seed, r).
inline std::vector<RunRecord> run_realization(const ExperimentConfig& cfg, int r) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
  std::vector<RunRecord> rows;
  switch (cfg.kind) {
    case ExperimentKind::GgmGrowth:
    case ExperimentKind::IprGrowth:
      detail::circuit_rows(cfg, cfg.layout, "", rng, r, rows);
      break;
    case ExperimentKind::CliffordCompare: {
      RngStream haar = rng.substream(0);
      RngStream cliff = rng.substream(1);
      detail::circuit_rows(cfg, Layout::BrickWall, ":brick", haar, r, rows);
      detail::circuit_rows(cfg, Layout::CliffordBrick, ":clifford", cliff, r, rows);
      break;
    }
    case ExperimentKind::RmpsSweep: {
      const GgmOptions opt{cfg.max_part_size, {}};
      for (int d : cfg.d_grid) {
        const StateVector s = mps_to_statevector(sample_rmps(rng, cfg.num_qubits, d, cfg.rmps_flavor));
        for (const auto& m : experiment_metrics(cfg)) rows.push_back({double(d), m, r, detail::evaluate_metric(m, s, opt)});
      }
      break;
    }
    case ExperimentKind::WeakSweep: {
      const WeakProtocol proto{cfg.layout, cfg.num_qubits, cfg.weak_t_equil, cfg.weak_trials, cfg.weak_mode};
      const auto vals = weak_measurement_realization(proto, cfg.lambda_grid, rng);
      for (std::size_t k = 0; k < vals.size(); ++k) rows.push_back({cfg.lambda_grid[k], "ggm", r, vals[k]});
      break;
    }
    case ExperimentKind::Fit:
    case ExperimentKind::Scaling:
      throw ConfigError("experiment '" + to_string(cfg.kind) + "' has no per-realization work");
  }
  return rows;
}

struct RunOutput {
  std::vector<RunRecord> rows;
  std::vector<SummaryRow> summary;
};

struct RunPaths {
  std::string rows;
  std::string summary;
};

/// `<out>.rows.csv` and `<out>.summary.csv`.
inline RunPaths output_paths(const std::string& out) { return {out + ".rows.csv", out + ".summary.csv"}; }

namespace detail {

/// Realizations already complete in an existing rows file. A realization counts
/// only if it and all lower indices have exactly `rows_per_realization` rows.
inline std::vector<RunRecord> completed_prefix(const std::string& path, std::size_t rows_per_realization) {
  std::vector<RunRecord> kept;
  const std::vector<RunRecord> rows = read_rows_prefix(path);
  int expect = 0;
  std::size_t i = 0;
  while (i + rows_per_realization <= rows.size()) {
    bool ok = true;
    for (std::size_t k = 0; k < rows_per_realization; ++k) ok = ok && rows[i + k].realization == expect;
    if (!ok) break;
    kept.insert(kept.end(), rows.begin() + static_cast<std::ptrdiff_t>(i),
                rows.begin() + static_cast<std::ptrdiff_t>(i + rows_per_realization));
    i += rows_per_realization;
    ++expect;
  }
  return kept;
}

inline std::size_t rows_per_realization(const ExperimentConfig& cfg) {
  const std::size_t m = experiment_metrics(cfg).size();
  switch (cfg.kind) {
    case ExperimentKind::GgmGrowth:
    case ExperimentKind::IprGrowth: return m * static_cast<std::size_t>(cfg.t_max);
    case ExperimentKind::CliffordCompare: return 2 * m * static_cast<std::size_t>(cfg.t_max);
    case ExperimentKind::RmpsSweep: return m * cfg.d_grid.size();
    case ExperimentKind::WeakSweep: return cfg.lambda_grid.size();
    default: return 0;
  }
}

}  // namespace detail

struct RunOptions {
  /// Keep complete realizations found in an existing rows file and compute only the rest.
  bool resume = false;
  /// Called after each realization is committed, in index order.
  std::function<void(int done, int total)> progress;
};

/// Runs all realizations on a pool of `workers` threads.
///
/// Workers pull realization indices from a shared counter; results are
/// committed (and appended to the rows file, when `cfg.out` is set) strictly
/// in ascending index order, and the summary is reduced in that same order,
/// so the output is identical for any worker count.
inline RunOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {}) {
  validate(cfg);
  const int total = cfg.realizations;
  const int workers = std::max(1, std::min(effective_workers(cfg.workers), total));

  RunOutput out;
  std::ofstream sink;
  RunPaths paths;
  int start = 0;
  if (!cfg.out.empty()) {
    paths = output_paths(cfg.out);
    if (const auto parent = std::filesystem::path(paths.rows).parent_path(); !parent.empty()) {
      std::filesystem::create_directories(parent);
    }
    if (options.resume) {
      out.rows = detail::completed_prefix(paths.rows, detail::rows_per_realization(cfg));
      const std::size_t per = detail::rows_per_realization(cfg);
      start = per ? static_cast<int>(out.rows.size() / per) : 0;
      if (start > total) start = total;
      out.rows.resize(static_cast<std::size_t>(start) * per);
    }
    write_rows_csv(paths.rows, out.rows);  // rewrites any torn tail
    sink.open(paths.rows, std::ios::binary | std::ios::app);
    if (!sink) throw ConfigError("cannot append to " + paths.rows);
  }

  std::mutex mu;
  std::condition_variable cv;
  std::vector<std::optional<std::vector<RunRecord>>> slots(static_cast<std::size_t>(total));
  int next = start;
  bool abort = false;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      int r;
      {
        std::lock_guard lock(mu);
        if (abort || next >= total) return;
        r = next++;
      }
      try {
        auto rows = run_realization(cfg, r);
        std::lock_guard lock(mu);
        slots[static_cast<std::size_t>(r)] = std::move(rows);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);

  for (int r = start; r < total; ++r) {
    std::vector<RunRecord> rows;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return abort || slots[static_cast<std::size_t>(r)].has_value(); });
      if (!slots[static_cast<std::size_t>(r)]) break;
      rows = std::move(*slots[static_cast<std::size_t>(r)]);
      slots[static_cast<std::size_t>(r)].reset();
    }
    if (sink.is_open()) {
      std::string text;
      for (const auto& row : rows) text += format_row(row);
      sink << text;
      sink.flush();
    }
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    if (options.progress) options.progress(r + 1, total);
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  out.summary = summarize(out.rows);
  if (!cfg.out.empty()) {
    sink.close();
    write_summary_csv(paths.summary, out.summary);
  }
  return out;
}

struct ScalingEntry {
  int num_qubits = 0;
  std::string metric;
  Saturation saturation;
};

inline constexpr std::string_view kScalingHeader = "n,metric,sat_value,sat_abscissa,saturated";

/// Repeats `cfg.scaling_experiment` for every N in `cfg.n_list` and reports the
/// saturation value and saturation abscissa (t_sat or D_sat) of each metric.
/// With `cfg.out` set, each run writes `<out>.n<N>.*.csv` and the table goes to
/// `<out>.scaling.csv`.
inline std::vector<ScalingEntry> scaling_sweep(const ExperimentConfig& cfg, const RunOptions& options = {}) {
  std::vector<ScalingEntry> table;
  for (int n : cfg.n_list) {
    ExperimentConfig sub = cfg;
    sub.kind = cfg.scaling_experiment;
    sub.num_qubits = n;
    if (!cfg.out.empty()) sub.out = cfg.out + ".n" + std::to_string(n);
    const RunOutput run = run_experiment(sub, options);
    std::vector<std::string> names;
    for (const auto& row : run.summary)
      if (std::find(names.begin(), names.end(), row.metric) == names.end()) names.push_back(row.metric);
    for (const auto& name : names) {
      const auto rule = saturation_rule(cfg, name);
      table.push_back({n, name, detect_saturation(series_for(run.summary, name), rule.decimals, rule.scale)});
    }
  }
  if (!cfg.out.empty()) {
    std::string text(kScalingHeader);
    text += '\n';
    for (const auto& e : table) {
      text += std::to_string(e.num_qubits) + ',' + e.metric + ',' + format_double(e.saturation.value) + ',' +
              format_double(e.saturation.abscissa) + ',' + (e.saturation.saturated ? "1" : "0") + '\n';
    }
    write_text_file(cfg.out + ".scaling.csv", text);
  }
  return table;
}

}  // namespace ggmsim
