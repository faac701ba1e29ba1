#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ggmsim/harness.hpp"

using namespace ggmsim;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("ggmsim_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_growth() {
  ExperimentConfig c;
  c.num_qubits = 5;
  c.t_max = 12;
  c.realizations = 6;
  c.seed = 77;
  c.metrics = {"ggm", "ipr"};
  return c;
}

}  // namespace

TEST(Records, FormatDoubleIsRoundTripExact) {
  EXPECT_EQ(format_double(sample_stats({0.1, 0.2}).mean), "0.15000000000000002");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(12.0), "12");
  RngStream rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform01() * std::pow(10.0, rng.uniform_int(-8, 8));
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_THROW(parse_double("0.1x"), FormatError);
  EXPECT_THROW(parse_integer("3.5"), FormatError);
}

TEST(Records, CsvRoundTrip) {
  TempDir dir;
  std::vector<RunRecord> rows;
  RngStream rng(2, 0);
  for (int r = 0; r < 3; ++r)
    for (int t = 1; t <= 4; ++t) rows.push_back({double(t), "ggm", r, rng.uniform01() * 0.5});
  write_rows_csv(dir.file("a.rows.csv"), rows);
  const auto back = read_rows_csv(dir.file("a.rows.csv"));
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].abscissa, rows[i].abscissa);
    EXPECT_EQ(back[i].metric, rows[i].metric);
    EXPECT_EQ(back[i].realization, rows[i].realization);
    EXPECT_EQ(back[i].value, rows[i].value);
  }
  const auto summary = summarize(rows);
  write_summary_csv(dir.file("a.summary.csv"), summary);
  const auto sback = read_summary_csv(dir.file("a.summary.csv"));
  ASSERT_EQ(sback.size(), 4u);
  for (std::size_t i = 0; i < summary.size(); ++i) {
    EXPECT_EQ(sback[i].mean, summary[i].mean);
    EXPECT_EQ(sback[i].stderr_, summary[i].stderr_);
    EXPECT_EQ(sback[i].count, 3u);
  }
}

TEST(Records, MalformedFilesAreRejected) {
  TempDir dir;
  write_text_file(dir.file("bad.csv"), "a,b,c\n1,2,3\n");
  EXPECT_THROW(read_rows_csv(dir.file("bad.csv")), FormatError);
  write_text_file(dir.file("short.csv"), std::string(kRowsHeader) + "\n1,ggm,0\n");
  EXPECT_THROW(read_rows_csv(dir.file("short.csv")), FormatError);
  EXPECT_THROW(read_rows_csv(dir.file("missing.csv")), FormatError);
}

TEST(Records, SummaryIgnoresRowOrder) {
  std::vector<RunRecord> rows{{1, "ggm", 1, 0.3}, {1, "ggm", 0, 0.1}, {1, "ggm", 2, 0.7}};
  std::vector<RunRecord> sorted{{1, "ggm", 0, 0.1}, {1, "ggm", 1, 0.3}, {1, "ggm", 2, 0.7}};
  const auto a = summarize(rows), b = summarize(sorted);
  EXPECT_EQ(format_summary(a[0]), format_summary(b[0]));
}

TEST(Config, SerializeParseRoundTrip) {
  ExperimentConfig c;
  c.kind = ExperimentKind::WeakSweep;
  c.layout = Layout::Star;
  c.num_qubits = 9;
  c.n_list = {4, 8};
  c.t_max = 33;
  c.realizations = 17;
  c.seed = 18446744073709551615ull;
  c.metrics = {"ggm", "ipr"};
  c.decimals = 2;
  c.out = "results/x";
  c.workers = 3;
  c.max_part_size = 2;
  c.rmps_flavor = MpsFlavor::GinibreSlices;
  c.d_grid = {1, 3, 9};
  c.lambda_grid = {0.1, 0.30000000000000004, 1.0};
  c.weak_trials = 7;
  c.weak_mode = WeakMode::Sequential;
  c.weak_t_equil = 40;
  c.scaling_experiment = ExperimentKind::IprGrowth;
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  EXPECT_EQ(parse_config(serialize_config(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, PartialFileOverlaysBase) {
  ExperimentConfig base;
  base.seed = 5;
  const auto c = parse_config("[experiment]\nlayout = allpairs\nt_max = 20\n", base);
  EXPECT_EQ(c.layout, Layout::AllPairs);
  EXPECT_EQ(c.t_max, 20);
  EXPECT_EQ(c.seed, 5u);
}

TEST(Config, ProfilesAndValidation) {
  ExperimentConfig c;
  apply_profile(c, "ci");
  EXPECT_EQ(c.num_qubits, 8);
  EXPECT_EQ(c.realizations, 50);
  apply_profile(c, "paper");
  EXPECT_EQ(c.num_qubits, 12);
  EXPECT_EQ(c.realizations, 200);
  EXPECT_THROW(apply_profile(c, "huge"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nlayout = ring\n"), ConfigError);
  EXPECT_THROW(parse_config("[experiment]\nt_max = ten\n"), FormatError);
  ExperimentConfig bad;
  bad.num_qubits = 15;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = {};
  bad.d_grid = {80};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = {};
  bad.metrics = {"entropy"};
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(Run, RowsCoverEveryRealizationAndIteration) {
  const ExperimentConfig c = small_growth();
  const RunOutput out = run_experiment(c);
  EXPECT_EQ(out.rows.size(), 6u * 12u * 2u);
  EXPECT_EQ(out.summary.size(), 12u * 2u);
  for (const auto& r : out.rows) {
    if (r.metric == "ggm") {
      EXPECT_GE(r.value, 0.0);
      EXPECT_LE(r.value, 0.5);
    } else {
      EXPECT_GE(r.value, 1.0);
      EXPECT_LE(r.value, 32.0);
    }
  }
}

TEST(Run, WorkerCountDoesNotChangeBytes) {
  TempDir dir;
  ExperimentConfig c = small_growth();
  c.workers = 1;
  c.out = dir.file("w1");
  run_experiment(c);
  c.workers = 8;
  c.out = dir.file("w8");
  run_experiment(c);
  EXPECT_EQ(slurp(dir.file("w1.rows.csv")), slurp(dir.file("w8.rows.csv")));
  EXPECT_EQ(slurp(dir.file("w1.summary.csv")), slurp(dir.file("w8.summary.csv")));
}

TEST(Run, SingleRealizationHasZeroStderr) {
  ExperimentConfig c = small_growth();
  c.realizations = 1;
  for (const auto& s : run_experiment(c).summary) {
    EXPECT_EQ(s.count, 1u);
    EXPECT_EQ(s.stderr_, 0.0);
  }
}

TEST(Run, ResumeKeepsPrefixAndAddsNoDuplicates) {
  TempDir dir;
  ExperimentConfig c = small_growth();
  c.out = dir.file("full");
  run_experiment(c);

  // Simulate an interrupted run: two complete realizations and a torn third.
  const auto full_rows = read_rows_csv(dir.file("full.rows.csv"));
  const std::size_t per = 12 * 2;
  std::string partial(kRowsHeader);
  partial += '\n';
  for (std::size_t i = 0; i < 2 * per + 5; ++i) partial += format_row(full_rows[i]);
  partial += "3,gg";
  ExperimentConfig r = c;
  r.out = dir.file("resumed");
  write_text_file(dir.file("resumed.rows.csv"), partial);
  RunOptions opt;
  opt.resume = true;
  int first_progress = -1;
  opt.progress = [&](int done, int) {
    if (first_progress < 0) first_progress = done;
  };
  run_experiment(r, opt);
  EXPECT_EQ(first_progress, 3);
  EXPECT_EQ(slurp(dir.file("resumed.rows.csv")), slurp(dir.file("full.rows.csv")));
  EXPECT_EQ(slurp(dir.file("resumed.summary.csv")), slurp(dir.file("full.summary.csv")));
}

TEST(Run, ResumeOfFinishedRunIsNoOp) {
  TempDir dir;
  ExperimentConfig c = small_growth();
  c.out = dir.file("done");
  run_experiment(c);
  const std::string before = slurp(dir.file("done.rows.csv"));
  RunOptions opt;
  opt.resume = true;
  bool called = false;
  opt.progress = [&](int, int) { called = true; };
  run_experiment(c, opt);
  EXPECT_FALSE(called);
  EXPECT_EQ(slurp(dir.file("done.rows.csv")), before);
}

TEST(Run, SummaryRecomputesFromRowsFile) {
  TempDir dir;
  ExperimentConfig c = small_growth();
  c.out = dir.file("s");
  run_experiment(c);
  const auto recomputed = summarize(read_rows_csv(dir.file("s.rows.csv")));
  std::string text(kSummaryHeader);
  text += '\n';
  for (const auto& row : recomputed) text += format_summary(row);
  EXPECT_EQ(text, slurp(dir.file("s.summary.csv")));
}

TEST(Run, CliffordCompareEmitsBothSeries) {
  ExperimentConfig c = small_growth();
  c.kind = ExperimentKind::CliffordCompare;
  c.metrics = {};
  const auto out = run_experiment(c);
  EXPECT_EQ(series_for(out.summary, "ggm:brick").size(), 12u);
  EXPECT_EQ(series_for(out.summary, "ggm:clifford").size(), 12u);
}

TEST(Run, RmpsAndWeakSweepsUseTheirAbscissae) {
  ExperimentConfig c = small_growth();
  c.metrics = {};
  c.kind = ExperimentKind::RmpsSweep;
  c.d_grid = {1, 2, 4};
  auto out = run_experiment(c);
  EXPECT_EQ(series_for(out.summary, "ggm").abscissa, (std::vector<double>{1, 2, 4}));
  EXPECT_EQ(out.summary[0].mean, 0.0);

  c.kind = ExperimentKind::WeakSweep;
  c.lambda_grid = {0.25, 1.0};
  c.weak_trials = 4;
  c.weak_t_equil = 5;
  out = run_experiment(c);
  EXPECT_EQ(series_for(out.summary, "ggm").abscissa, (std::vector<double>{0.25, 1.0}));
}

TEST(Run, EnvironmentOverridesWorkers) {
  ::setenv("GGMSIM_WORKERS", "3", 1);
  EXPECT_EQ(effective_workers(1), 3);
  ::setenv("GGMSIM_WORKERS", "0", 1);
  EXPECT_THROW(effective_workers(1), ConfigError);
  ::unsetenv("GGMSIM_WORKERS");
  EXPECT_EQ(effective_workers(2), 2);
}

TEST(Scaling, SmokeAtSmallN) {
  TempDir dir;
  ExperimentConfig c = small_growth();
  c.kind = ExperimentKind::Scaling;
  c.n_list = {3, 4};
  c.metrics = {};
  c.realizations = 3;
  c.out = dir.file("sc");
  const auto table = scaling_sweep(c);
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0].num_qubits, 3);
  EXPECT_TRUE(fs::exists(dir.file("sc.n4.summary.csv")));
  const std::string text = slurp(dir.file("sc.scaling.csv"));
  EXPECT_EQ(text.substr(0, kScalingHeader.size()), kScalingHeader);
}
