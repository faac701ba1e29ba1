#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "ggmsim/error.hpp"

namespace ggmsim {

/// Ensemble-averaged metric against an abscissa (iteration t, bond dimension D, or lambda).
struct MetricSeries {
  std::vector<double> abscissa;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<std::size_t> count;

  std::size_t size() const { return mean.size(); }

  /// Series with unit spacing starting at t = 1 and no error bars.
  static MetricSeries from_values(std::vector<double> values) {
    MetricSeries s;
    s.abscissa.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) s.abscissa[i] = double(i + 1);
    s.stderr_.assign(values.size(), 0.0);
    s.count.assign(values.size(), 1);
    s.mean = std::move(values);
    return s;
  }
};

/// Mean and standard error (sample standard deviation / sqrt(n)) accumulated
/// in the order the values are given.
struct SampleStats {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

inline SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / double(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stderr_ = std::sqrt(ss / double(values.size() - 1)) / std::sqrt(double(values.size()));
  }
  return s;
}

struct Saturation {
  bool saturated = false;
  double value = 0.0;      ///< rounded saturation value (in unscaled units)
  double abscissa = 0.0;   ///< first abscissa from which the series stays at `value`
  std::size_t index = 0;
};

/// Saturation of a series at a fixed rounding.
///
/// The saturation value is the mean of the last max(5, 10%) points, rounded
/// to `decimals` places after multiplying by `scale` (e.g. scale = 1e-3 to
/// round IPR in units of 10^3). The saturation point is the first entry from
/// which every later entry rounds to that same value.
inline Saturation detect_saturation(const MetricSeries& series, int decimals, double scale = 1.0) {
  const std::size_t n = series.size();
  if (n < 10) throw ArgumentError("saturation detection needs at least 10 points");
  const std::size_t tail = std::max<std::size_t>(5, n / 10);
  double sum = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) sum += series.mean[i];
  const double unit = std::pow(10.0, decimals);
  auto rounded = [&](double v) { return std::llround(v * scale * unit); };
  const long long target = rounded(sum / double(tail));

  Saturation out;
  out.value = double(target) / unit / scale;
  std::size_t first = n;
  for (std::size_t i = n; i-- > 0;) {
    if (rounded(series.mean[i]) != target) break;
    first = i;
  }
  if (first == n) return out;
  out.saturated = true;
  out.index = first;
  out.abscissa = series.abscissa[first];
  return out;
}

struct TanhFit {
  double t0 = 0.0;
  std::vector<double> residual;  ///< |G(t)/G_sat - tanh(t/t0)| per point
};

/// One-parameter fit of G(t)/G_sat ~ tanh(t/t0) by golden-section search on
/// the least-squares objective over t0 in [0.1, 100].
inline TanhFit fit_tanh(const MetricSeries& series, double sat_value, double tolerance = 1e-6) {
  if (!(sat_value > 0.0)) throw FitError("saturation value must be positive");
  if (series.size() == 0) throw FitError("empty series");
  if (std::all_of(series.mean.begin(), series.mean.end(), [](double v) { return v == 0.0; })) {
    throw FitError("flat zero series has no growth to fit");
  }
  auto objective = [&](double t0) {
    double s = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double d = series.mean[i] / sat_value - std::tanh(series.abscissa[i] / t0);
      s += d * d;
    }
    return s;
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.1, b = 100.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(d);
    }
  }
  TanhFit fit;
  fit.t0 = 0.5 * (a + b);
  fit.residual.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    fit.residual.push_back(std::abs(series.mean[i] / sat_value - std::tanh(series.abscissa[i] / fit.t0)));
  }
  return fit;
}

}  // namespace ggmsim
