// SPDX-License-Identifier: Apache-2.0
//
// onebit-doa: one-bit single-snapshot DOA estimation for sparse linear arrays
// Copyright (C) 2026 The onebit-doa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "onebit_doa/harness.hpp"

namespace od = onebit_doa;
namespace fs = std::filesystem;

namespace {

constexpr const char* kConfig = R"({
  "geometry": "sla18",
  "grid": {"lo_deg": -60, "hi_deg": 60, "spacing_deg": 2},
  "scenario": {"doas_deg": [-30, 30], "amplitudes": [[1, 0], [0, 1]]},
  "snr_db": [0, 5, 10, 15, 20, 25, 30],
  "trials": 3,
  "seed": 11,
  "trace_trials": 1,
  "methods": [
    {"solver": "sbri", "mode": "on_grid"},
    {"solver": "sbri_x", "mode": "off_grid", "label": "x_off", "params": {"b": 0.5, "t_max": 15}}
  ]
})";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("onebit_doa_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(BenchConfig, Parse) {
  const auto cfg = od::parse_bench_config(kConfig);
  EXPECT_EQ(cfg.geometry.size(), 18U);
  EXPECT_EQ(cfg.grid.size(), 61U);
  ASSERT_EQ(cfg.methods.size(), 2U);
  EXPECT_EQ(cfg.methods[0].label, "sbri.on_grid");
  EXPECT_EQ(cfg.methods[1].label, "x_off");
  EXPECT_EQ(cfg.methods[1].solver, od::SolverKind::sbri_x);
  EXPECT_EQ(cfg.methods[1].mode, od::SolveMode::off_grid);
  EXPECT_EQ(cfg.methods[1].sbrix.base.t_max, 15);
  EXPECT_DOUBLE_EQ(cfg.methods[1].sbrix.b, 0.5);
  EXPECT_EQ(cfg.amplitudes.size(), 2U);
  EXPECT_EQ(cfg.amplitudes[1], od::Complex(0, 1));
  EXPECT_EQ(cfg.trials, 3U);
  EXPECT_EQ(cfg.seed, 11U);
  EXPECT_EQ(cfg.trace_trials, 1U);
}

TEST(BenchConfig, RejectsInvalid) {
  EXPECT_THROW(od::parse_bench_config("{"), std::invalid_argument);
  EXPECT_THROW(od::parse_bench_config(R"({"methods": []})"), std::invalid_argument);
  EXPECT_THROW(od::parse_bench_config(R"({"methods": [{"solver": "nope"}]})"), std::invalid_argument);
  EXPECT_THROW(od::parse_bench_config(R"({"trials": 0, "methods": [{"solver": "sbri"}]})"), std::invalid_argument);
  EXPECT_THROW(od::parse_bench_config(R"({"methods": [{"solver": "sbri"}, {"solver": "sbri"}]})"),
               std::invalid_argument);
  EXPECT_THROW(od::parse_bench_config(
                   R"({"scenario": {"doas_deg": [0, 10], "amplitudes": [[1, 0]]}, "methods": [{"solver": "sbri"}]})"),
               std::invalid_argument);
}

TEST(SolverKind, Names) {
  EXPECT_EQ(od::parse_solver_kind("sbri_x"), od::SolverKind::sbri_x);
  EXPECT_EQ(od::parse_solver_kind("sbrix"), od::SolverKind::sbri_x);
  EXPECT_EQ(od::parse_solver_kind("slim"), od::SolverKind::sbri_slim_prior);
  EXPECT_EQ(od::to_string(od::SolverKind::sbri_slim_prior), "sbri_slim_prior");
  EXPECT_THROW(od::parse_solver_kind("music"), std::invalid_argument);
}

TEST(FormatValue, NineSignificantDigits) {
  EXPECT_EQ(od::format_value(0.1234567891234), "0.123456789");
  EXPECT_EQ(od::format_value(30.0), "30");
  EXPECT_EQ(od::format_value(-1.5e-7), "-1.5e-07");
}

class BenchRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new od::BenchConfig(od::parse_bench_config(kConfig));
    serial_ = new od::BenchResult(od::run_bench(*cfg_, 1));
  }
  static void TearDownTestSuite() {
    delete serial_;
    delete cfg_;
  }
  static od::BenchConfig* cfg_;
  static od::BenchResult* serial_;
};

od::BenchConfig* BenchRun::cfg_ = nullptr;
od::BenchResult* BenchRun::serial_ = nullptr;

TEST_F(BenchRun, RowCountsAndOrder) {
  ASSERT_EQ(serial_->trials.size(), 2U * 7U * 3U);
  ASSERT_EQ(serial_->summary.size(), 14U);
  EXPECT_EQ(serial_->trials[0].method, "sbri.on_grid");
  EXPECT_EQ(serial_->trials.back().method, "x_off");
  EXPECT_EQ(serial_->summary[0].snr_db, 0.0);
  EXPECT_EQ(serial_->summary[6].snr_db, 30.0);
  for (const auto& r : serial_->trials) {
    EXPECT_EQ(r.estimates_deg.size(), 2U);
    EXPECT_TRUE(r.error.empty());
  }
  // One trace per (method, snr) for trace_trials = 1.
  EXPECT_EQ(serial_->traces.size(), 14U);
  for (const auto& t : serial_->traces) {
    EXPECT_EQ(t.trial, 0U);
    EXPECT_EQ(t.objective.size(), t.change.size() + 1);
  }
}

TEST_F(BenchRun, ParallelRunIsIdentical) {
  const auto par = od::run_bench(*cfg_, 4);
  ASSERT_EQ(par.trials.size(), serial_->trials.size());
  for (std::size_t i = 0; i < par.trials.size(); ++i) {
    const auto& a = par.trials[i];
    const auto& b = serial_->trials[i];
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(a.trial, b.trial);
    EXPECT_EQ(a.estimates_deg, b.estimates_deg);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.hit, b.hit);
  }
  const auto d1 = scratch("serial");
  const auto d2 = scratch("parallel");
  od::write_bench_outputs(*serial_, *cfg_, d1);
  od::write_bench_outputs(par, *cfg_, d2);
  for (const char* f : {"trials.csv", "summary.csv", "traces.csv", "report.md"}) {
    EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
  }
}

TEST_F(BenchRun, SummaryIsRecomputableFromTrialsCsv) {
  const auto dir = scratch("recompute");
  od::write_bench_outputs(*serial_, *cfg_, dir);
  const auto rows = od::read_trials_csv(dir / "trials.csv");
  ASSERT_EQ(rows.size(), serial_->trials.size());
  od::write_summary_csv(od::summarize_rows(rows, 2), dir / "again.csv");
  EXPECT_EQ(slurp(dir / "summary.csv"), slurp(dir / "again.csv"));

  const std::string header = slurp(dir / "trials.csv").substr(0, slurp(dir / "trials.csv").find('\n'));
  EXPECT_EQ(header, "method,snr_db,trial,hit,est_1,est_2,err_1,err_2,sq_err_sum,iterations,converged,error");
  const std::string sheader = slurp(dir / "summary.csv").substr(0, slurp(dir / "summary.csv").find('\n'));
  EXPECT_EQ(sheader, "method,snr_db,trials,hits,hit_rate,rmse_deg,mean_iterations,failures");
  EXPECT_TRUE(fs::exists(dir / "timing.csv"));
}

TEST_F(BenchRun, SeriesFilesPerMethod) {
  const auto dir = scratch("series");
  const auto files = od::emit_report(serial_->summary, {"rmse_deg"}, dir);
  ASSERT_EQ(files.size(), cfg_->methods.size());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line[0], '#');
    std::vector<double> xs;
    double x = 0.0;
    std::string y;
    while (in >> x >> y) xs.push_back(x);
    EXPECT_EQ(xs, cfg_->snr_db);
  }
  EXPECT_THROW(od::emit_report(serial_->summary, {"bogus"}, dir), std::invalid_argument);
}

TEST(Bench, TrialSeedIsSharedAcrossMethods) {
  EXPECT_EQ(od::trial_seed(5, 1, 2), od::trial_seed(5, 1, 2));
  EXPECT_NE(od::trial_seed(5, 1, 2), od::trial_seed(5, 2, 1));
}
