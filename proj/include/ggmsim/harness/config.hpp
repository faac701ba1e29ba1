#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ggmsim/circuits.hpp"
#include "ggmsim/error.hpp"
#include "ggmsim/harness/records.hpp"
#include "ggmsim/measurement.hpp"
#include "ggmsim/rmps.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

enum class ExperimentKind { GgmGrowth, CliffordCompare, RmpsSweep, IprGrowth, WeakSweep, Fit, Scaling };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::GgmGrowth: return "ggm-growth";
    case ExperimentKind::CliffordCompare: return "clifford-compare";
    case ExperimentKind::RmpsSweep: return "rmps-sweep";
    case ExperimentKind::IprGrowth: return "ipr-growth";
    case ExperimentKind::WeakSweep: return "weak-sweep";
    case ExperimentKind::Fit: return "fit";
    case ExperimentKind::Scaling: return "scaling";
  }
  return "?";
}

inline ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::GgmGrowth, ExperimentKind::CliffordCompare, ExperimentKind::RmpsSweep,
                 ExperimentKind::IprGrowth, ExperimentKind::WeakSweep, ExperimentKind::Fit, ExperimentKind::Scaling}) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::GgmGrowth;
  Layout layout = Layout::BrickWall;
  int num_qubits = 12;
  std::vector<int> n_list{4, 6, 8, 10, 12};
  int t_max = 50;
  int realizations = 200;
  std::uint64_t seed = 1;
  /// Empty means the experiment's default metric set.
  std::vector<std::string> metrics;
  int decimals = 3;
  std::string out;
  int workers = 1;
  std::string profile = "paper";
  /// 0 = all cuts. Profiling only; acceptance runs require 0.
  int max_part_size = 0;

  MpsFlavor rmps_flavor = MpsFlavor::UnitarySlices;
  std::vector<int> d_grid = default_d_grid();

  std::vector<double> lambda_grid = default_lambda_grid();
  int weak_trials = 100;
  WeakMode weak_mode = WeakMode::Independent;
  int weak_t_equil = 50;

  /// Experiment repeated over n_list by the scaling sweep.
  ExperimentKind scaling_experiment = ExperimentKind::GgmGrowth;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Named presets: `ci` (N = 8, 50 realizations) and `paper` (N = 12, 200 realizations).
inline void apply_profile(ExperimentConfig& cfg, std::string_view profile) {
  if (profile == "ci") {
    cfg.num_qubits = 8;
    cfg.realizations = 50;
  } else if (profile == "paper") {
    cfg.num_qubits = 12;
    cfg.realizations = 200;
  } else {
    throw ConfigError("unknown profile '" + std::string(profile) + "' (ci|paper)");
  }
  cfg.profile = std::string(profile);
}

inline void validate(const ExperimentConfig& cfg) {
  check_qubit_count(cfg.num_qubits);
  for (int n : cfg.n_list) check_qubit_count(n);
  if (cfg.t_max < 1) throw ConfigError("t_max must be >= 1");
  if (cfg.realizations < 1) throw ConfigError("realizations must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.decimals < 0 || cfg.decimals > 12) throw ConfigError("decimals must lie in [0, 12]");
  if (cfg.max_part_size < 0) throw ConfigError("max_part_size must be >= 0");
  for (const auto& m : cfg.metrics)
    if (m != "ggm" && m != "ipr") throw ConfigError("unknown metric '" + m + "' (ggm|ipr)");
  if (cfg.d_grid.empty()) throw ConfigError("rmps.d_grid is empty");
  for (int d : cfg.d_grid)
    if (d < 1 || d > kMaxBondDimension) throw ConfigError("bond dimension out of range in rmps.d_grid");
  if (cfg.lambda_grid.empty()) throw ConfigError("weak.lambda_grid is empty");
  for (double l : cfg.lambda_grid)
    if (!(l > 0.0 && l <= 1.0)) throw ConfigError("weak.lambda_grid entries must lie in (0, 1]");
  if (cfg.weak_trials < 1) throw ConfigError("weak.trials must be >= 1");
  if (cfg.weak_t_equil < 1) throw ConfigError("weak.t_equil must be >= 1");
}

namespace detail {

template <class T, class Format>
std::string join(const std::vector<T>& v, Format fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  for (const auto& x : split_list(s)) v.push_back(static_cast<int>(parse_integer(x)));
  return v;
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> v;
  for (const auto& x : split_list(s)) v.push_back(parse_double(x));
  return v;
}

}  // namespace detail

inline std::vector<int> parse_int_list(const std::string& s) { return detail::parse_int_list(s); }
inline std::vector<double> parse_double_list(const std::string& s) { return detail::parse_double_list(s); }

/// INI text with one section per module: [experiment], [ggm], [rmps], [weak], [scaling].
inline std::string serialize_config(const ExperimentConfig& c) {
  namespace pt = boost::property_tree;
  pt::ptree t;
  auto itos = [](int v) { return std::to_string(v); };
  t.put("experiment.kind", to_string(c.kind));
  t.put("experiment.layout", to_string(c.layout));
  t.put("experiment.n", c.num_qubits);
  t.put("experiment.n_list", detail::join(c.n_list, itos));
  t.put("experiment.t_max", c.t_max);
  t.put("experiment.realizations", c.realizations);
  t.put("experiment.seed", c.seed);
  t.put("experiment.metrics", detail::join(c.metrics, [](const std::string& s) { return s; }));
  t.put("experiment.decimals", c.decimals);
  t.put("experiment.out", c.out);
  t.put("experiment.workers", c.workers);
  t.put("experiment.profile", c.profile);
  t.put("ggm.max_part_size", c.max_part_size);
  t.put("rmps.flavor", to_string(c.rmps_flavor));
  t.put("rmps.d_grid", detail::join(c.d_grid, itos));
  t.put("weak.lambda_grid", detail::join(c.lambda_grid, format_double));
  t.put("weak.trials", c.weak_trials);
  t.put("weak.mode", to_string(c.weak_mode));
  t.put("weak.t_equil", c.weak_t_equil);
  t.put("scaling.experiment", to_string(c.scaling_experiment));
  std::ostringstream os;
  pt::write_ini(os, t);
  return os.str();
}

/// Overlays the keys present in `text` onto `base`; absent keys keep their value.
inline ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {}) {
  namespace pt = boost::property_tree;
  pt::ptree t;
  std::istringstream is(text);
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  ExperimentConfig c = std::move(base);
  auto str = [&](const char* key) { return t.get_optional<std::string>(key); };
  auto integer = [&](const char* key, int& dst) {
    if (auto v = str(key)) dst = static_cast<int>(parse_integer(*v));
  };
  try {
    if (auto v = str("experiment.profile")) apply_profile(c, *v);
    if (auto v = str("experiment.kind")) c.kind = parse_experiment_kind(*v);
    if (auto v = str("experiment.layout")) c.layout = parse_layout(*v);
    integer("experiment.n", c.num_qubits);
    if (auto v = str("experiment.n_list")) c.n_list = detail::parse_int_list(*v);
    integer("experiment.t_max", c.t_max);
    integer("experiment.realizations", c.realizations);
    if (auto v = str("experiment.seed")) c.seed = std::stoull(*v);
    if (auto v = str("experiment.metrics")) c.metrics = detail::split_list(*v);
    integer("experiment.decimals", c.decimals);
    if (auto v = str("experiment.out")) c.out = *v;
    integer("experiment.workers", c.workers);
    integer("ggm.max_part_size", c.max_part_size);
    if (auto v = str("rmps.flavor")) c.rmps_flavor = parse_flavor(*v);
    if (auto v = str("rmps.d_grid")) c.d_grid = detail::parse_int_list(*v);
    if (auto v = str("weak.lambda_grid")) c.lambda_grid = detail::parse_double_list(*v);
    integer("weak.trials", c.weak_trials);
    if (auto v = str("weak.mode")) c.weak_mode = parse_weak_mode(*v);
    integer("weak.t_equil", c.weak_t_equil);
    if (auto v = str("scaling.experiment")) c.scaling_experiment = parse_experiment_kind(*v);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace ggmsim
