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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "onebit_doa/array_model.hpp"
#include "onebit_doa/sbrix.hpp"
#include "onebit_doa/spectrum.hpp"

namespace onebit_doa {

enum class SolverKind { sbri, sbri_x, sbri_slim_prior };

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);

/// One estimator configuration in a benchmark.
struct MethodSpec {
  std::string label;
  SolverKind solver = SolverKind::sbri;
  SolveMode mode = SolveMode::on_grid;
  /// Used by sbri and sbri_slim_prior; the latter forces PriorMode::slim.
  SbriConfig sbri;
  SbriXConfig sbrix;

  static MethodSpec make(SolverKind solver, SolveMode mode, std::string label = {});
};

struct BenchConfig {
  ArrayGeometry geometry = ArrayGeometry::sla18();
  AngleGrid grid{-60.0, 60.0, 1.0};
  std::vector<double> doas_deg{-30.0, 30.0};
  /// Fixed amplitudes; when empty every trial draws Re, Im ~ U(0.5, 1).
  std::vector<Complex> amplitudes;
  std::vector<MethodSpec> methods;
  std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  double hit_threshold_deg = 2.0;
  /// Trials (per method and SNR) whose per-iteration traces are kept.
  std::size_t trace_trials = 0;

  void validate() const;
};

/// Parses the JSON bench configuration (see README for the schema).
BenchConfig parse_bench_config(std::string_view json_text);
BenchConfig load_bench_config(const std::filesystem::path& path);

struct TrialRow {
  std::string method;
  double snr_db = 0.0;
  std::size_t trial = 0;
  bool hit = false;
  std::vector<double> estimates_deg;
  std::vector<double> errors_deg;
  double sq_err_sum = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
  /// Non-empty when the solver raised a numerical error; the trial is a miss.
  std::string error;
};

struct SummaryRow {
  std::string method;
  double snr_db = 0.0;
  MetricSummary metrics;
  double mean_iterations = 0.0;
  std::size_t failures = 0;
};

struct TraceRecord {
  std::string method;
  double snr_db = 0.0;
  std::size_t trial = 0;
  std::vector<double> objective;
  std::vector<double> change;
};

struct BenchResult {
  std::vector<TrialRow> trials;   ///< ordered by (method, snr, trial)
  std::vector<SummaryRow> summary;
  std::vector<TraceRecord> traces;
};

/// Runs one configured estimator on a snapshot.
SolverResult run_method(const MethodSpec& method, const OneBitSnapshot& ybar, const SteeringDictionary& dict);

/// Noise and amplitude seed of a (snr index, trial) pair. Shared by all
/// methods so that method comparisons are paired.
std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial);

/// Monte Carlo sweep over methods x SNRs x trials. The result does not
/// depend on `threads`.
BenchResult run_bench(const BenchConfig& cfg, unsigned threads = 1);

/// Aggregates rows per (method, snr) in first-appearance order with K
/// targets. Values stored in rows are already rounded to the CSV precision,
/// so aggregating rows read back from trials.csv gives identical output.
std::vector<SummaryRow> summarize_rows(const std::vector<TrialRow>& rows, std::size_t targets);

/// trials.csv (deterministic columns only), timing.csv (wall time),
/// summary.csv, traces.csv (when traces exist), series files and report.md.
void write_bench_outputs(const BenchResult& result, const BenchConfig& cfg, const std::filesystem::path& dir);

void write_trials_csv(const std::vector<TrialRow>& rows, std::size_t targets, const std::filesystem::path& path);
std::vector<TrialRow> read_trials_csv(const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

/// One whitespace-delimited "snr value" file per (metric, method) under
/// dir/series, plus dir/report.md. Supported metrics: rmse_deg, hit_rate,
/// mean_iterations. Returns the series files written.
std::vector<std::filesystem::path> emit_report(const std::vector<SummaryRow>& summary,
                                               const std::vector<std::string>& metrics,
                                               const std::filesystem::path& dir);

/// Formats with 9 significant digits, the precision used in every CSV.
std::string format_value(double value);

}  // namespace onebit_doa
