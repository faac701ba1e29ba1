#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ggmsim/error.hpp"
#include "ggmsim/series.hpp"

namespace ggmsim {

/// One metric value of one realization at one abscissa (t, D or lambda).
struct RunRecord {
  double abscissa = 0.0;
  std::string metric;
  int realization = 0;
  double value = 0.0;
};

struct SummaryRow {
  double abscissa = 0.0;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

inline constexpr std::string_view kRowsHeader = "abscissa,metric,realization,value";
inline constexpr std::string_view kSummaryHeader = "abscissa,metric,mean,stderr,count";

/// Always 17 significant digits: byte-stable and parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline long long parse_integer(std::string_view s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw FormatError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

inline std::string format_row(const RunRecord& r) {
  return format_double(r.abscissa) + ',' + r.metric + ',' + std::to_string(r.realization) + ',' +
         format_double(r.value) + '\n';
}

inline std::string format_summary(const SummaryRow& s) {
  return format_double(s.abscissa) + ',' + s.metric + ',' + format_double(s.mean) + ',' +
         format_double(s.stderr_) + ',' + std::to_string(s.count) + '\n';
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class RowParser>
auto read_csv(const std::string& path, std::string_view header, RowParser parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw FormatError(path + ": expected header '" + std::string(header) + "'");
  }
  std::vector<decltype(parse(std::vector<std::string_view>{}))> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5 && fields.size() != 4) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": wrong field count");
    }
    try {
      rows.push_back(parse(fields));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace detail

inline std::vector<RunRecord> read_rows_csv(const std::string& path) {
  return detail::read_csv(path, kRowsHeader, [](const std::vector<std::string_view>& f) {
    if (f.size() != 4) throw FormatError("row needs 4 fields");
    return RunRecord{parse_double(f[0]), std::string(f[1]), static_cast<int>(parse_integer(f[2])),
                     parse_double(f[3])};
  });
}

/// Leading rows of a rows file that may have been cut off mid-write: reading
/// stops at the first malformed or unterminated line. A missing file or a
/// foreign header yields no rows.
inline std::vector<RunRecord> read_rows_prefix(const std::string& path) {
  std::vector<RunRecord> rows;
  std::ifstream in(path, std::ios::binary);
  if (!in) return rows;
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  std::size_t pos = text.find('\n');
  if (pos == std::string::npos || std::string_view(text).substr(0, pos) != kRowsHeader) return rows;
  ++pos;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) break;
    const auto f = detail::split_csv_line(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    if (f.size() != 4) break;
    try {
      rows.push_back({parse_double(f[0]), std::string(f[1]), static_cast<int>(parse_integer(f[2])),
                      parse_double(f[3])});
    } catch (const FormatError&) {
      break;
    }
  }
  return rows;
}

/// Reads a summary CSV (also used for reference curves fed to fitting and D_min matching).
inline std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  return detail::read_csv(path, kSummaryHeader, [](const std::vector<std::string_view>& f) {
    if (f.size() != 5) throw FormatError("summary row needs 5 fields");
    return SummaryRow{parse_double(f[0]), std::string(f[1]), parse_double(f[2]), parse_double(f[3]),
                      static_cast<std::size_t>(parse_integer(f[4]))};
  });
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

inline void write_rows_csv(const std::string& path, const std::vector<RunRecord>& rows) {
  std::string text(kRowsHeader);
  text += '\n';
  for (const auto& r : rows) text += format_row(r);
  write_text_file(path, text);
}

inline void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::string text(kSummaryHeader);
  text += '\n';
  for (const auto& r : rows) text += format_summary(r);
  write_text_file(path, text);
}

/// Per-(abscissa, metric) mean and standard error over realizations.
///
/// Groups appear in the order they first occur; within a group values are
/// reduced in ascending realization order, so the result does not depend on
/// the order rows were produced in.
inline std::vector<SummaryRow> summarize(const std::vector<RunRecord>& rows) {
  std::vector<std::pair<double, std::string>> keys;
  std::map<std::pair<double, std::string>, std::vector<std::pair<int, double>>> groups;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.abscissa, r.metric);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.emplace_back(r.realization, r.value);
  }
  std::vector<SummaryRow> out;
  out.reserve(keys.size());
  for (const auto& key : keys) {
    auto& vals = groups[key];
    std::stable_sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> v;
    v.reserve(vals.size());
    for (const auto& [r, x] : vals) v.push_back(x);
    const SampleStats st = sample_stats(v);
    out.push_back({key.first, key.second, st.mean, st.stderr_, st.count});
  }
  return out;
}

/// The summary rows of one metric as a series, in file order.
inline MetricSeries series_for(const std::vector<SummaryRow>& summary, std::string_view metric) {
  MetricSeries s;
  for (const auto& row : summary) {
    if (row.metric != metric) continue;
    s.abscissa.push_back(row.abscissa);
    s.mean.push_back(row.mean);
    s.stderr_.push_back(row.stderr_);
    s.count.push_back(row.count);
  }
  return s;
}

}  // namespace ggmsim
