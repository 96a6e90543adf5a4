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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "onebit_doa/dataset.hpp"
#include "onebit_doa/harness.hpp"
#include "onebit_doa/runtime.hpp"

namespace od = onebit_doa;

namespace {

void print_list(const char* name, const std::vector<double>& values) {
  std::cout << name << ':';
  for (double v : values) std::cout << ' ' << od::format_value(v);
  std::cout << '\n';
}

od::MethodSpec method_from_flags(const std::string& solver, const std::string& mode, double b) {
  od::MethodSpec m = od::MethodSpec::make(od::parse_solver_kind(solver), od::parse_solve_mode(mode));
  m.sbrix.b = b;
  return m;
}

void report_solution(const od::MethodSpec& method, const od::SolverResult& res, const od::SteeringDictionary& dict,
                     const std::vector<double>& truth, double threshold) {
  const od::DoaEstimate est = od::estimate_doas(dict, res.x, res.beta_rad, static_cast<int>(truth.size()));
  const od::TrialScore score = od::score_trial(est, truth, threshold);
  std::cout << "method: " << method.label << '\n';
  print_list("estimates_deg", est.angles_deg);
  print_list("truth_deg", truth);
  print_list("errors_deg", score.errors_deg);
  std::cout << "hit: " << (score.hit ? 1 : 0) << '\n'
            << "iterations: " << res.iterations << '\n'
            << "converged: " << (res.converged ? 1 : 0) << '\n';
}

int run_bench_cmd(const std::string& config, const std::string& out, std::optional<unsigned> threads) {
  const od::BenchConfig cfg = od::load_bench_config(config);
  const unsigned t = od::resolve_threads(threads);
  const od::BenchResult result = od::run_bench(cfg, t);
  od::write_bench_outputs(result, cfg, out);
  for (const od::SummaryRow& r : result.summary) {
    std::printf("%-28s snr=%6s hit_rate=%-10s rmse_deg=%-12s iters=%s\n", r.method.c_str(),
                od::format_value(r.snr_db).c_str(), od::format_value(r.metrics.hit_rate).c_str(),
                od::format_value(r.metrics.rmse_deg).c_str(), od::format_value(r.mean_iterations).c_str());
  }
  return 0;
}

int run_solve_cmd(const std::string& input, std::size_t index, const std::string& solver, std::string mode,
                  double b, double threshold) {
  const od::Dataset data = od::read_dataset(input);
  if (index >= data.records.size()) {
    std::cerr << "index " << index << " out of range (" << data.records.size() << " records)\n";
    return 2;
  }
  if (mode.empty()) mode = od::to_string(data.manifest.mode);
  const od::MethodSpec method = method_from_flags(solver, mode, b);
  const od::ArrayGeometry geom(data.manifest.positions);
  const od::SteeringDictionary dict = od::build_dictionary(geom, data.manifest.grid);
  const od::DatasetRecord& rec = data.records[index];
  const od::SolverResult res = od::run_method(method, od::record_snapshot(rec), dict);
  report_solution(method, res, dict, {rec.truth_doas.begin(), rec.truth_doas.end()}, threshold);
  std::cout << "snr_db: " << od::format_value(rec.snr_db) << '\n';
  return 0;
}

int run_score_predictions(const std::string& input, const std::string& predictions, const std::string& out,
                          double threshold) {
  const od::Dataset data = od::read_dataset(input);
  const std::size_t n = data.manifest.grid_size;
  const std::vector<od::Prediction> preds = od::read_predictions(predictions, n);
  if (preds.size() > data.records.size()) {
    std::cerr << preds.size() << " predictions but only " << data.records.size() << " records\n";
    return 2;
  }
  const od::SteeringDictionary dict =
      od::build_dictionary(od::ArrayGeometry(data.manifest.positions), data.manifest.grid);
  const auto k = static_cast<int>(data.manifest.sources);

  std::vector<od::TrialRow> rows;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const od::DatasetRecord& rec = data.records[i];
    std::vector<double> mag(preds[i].spectrum.begin(), preds[i].spectrum.end());
    od::RVector beta(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) beta[static_cast<Eigen::Index>(j)] = od::deg_to_rad(preds[i].gaps_deg[j]);
    const auto peaks = od::find_peaks(mag, k);
    const od::DoaEstimate est = od::extract_doas(dict, beta, peaks);
    const std::vector<double> truth(rec.truth_doas.begin(), rec.truth_doas.end());
    const od::TrialScore score = od::score_trial(est, truth, threshold);
    od::TrialRow row;
    row.method = "predictions";
    row.snr_db = rec.snr_db;
    row.trial = i;
    row.hit = score.hit;
    row.estimates_deg = est.angles_deg;
    row.errors_deg = score.errors_deg;
    row.sq_err_sum = score.sq_err_sum;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) { return l.snr_db < r.snr_db; });
  const auto summary = od::summarize_rows(rows, data.manifest.sources);
  if (!out.empty()) {
    od::write_trials_csv(rows, data.manifest.sources, std::filesystem::path(out) / "trials.csv");
    od::write_summary_csv(summary, std::filesystem::path(out) / "summary.csv");
  }
  std::vector<od::TrialScore> all;
  for (const auto& r : rows) all.push_back({r.hit, r.sq_err_sum, r.errors_deg});
  const od::MetricSummary total = od::summarize_scores(all, data.manifest.sources);
  for (const od::SummaryRow& r : summary) {
    std::printf("snr=%6s trials=%zu hit_rate=%-10s rmse_deg=%s\n", od::format_value(r.snr_db).c_str(),
                r.metrics.trials, od::format_value(r.metrics.hit_rate).c_str(),
                od::format_value(r.metrics.rmse_deg).c_str());
  }
  std::printf("all        trials=%zu hit_rate=%-10s rmse_deg=%s\n", total.trials,
              od::format_value(total.hit_rate).c_str(), od::format_value(total.rmse_deg).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit single-snapshot DOA estimation for sparse linear arrays"};
  app.require_subcommand(1);

  std::optional<unsigned> threads;

  auto* bench = app.add_subcommand("bench", "Monte Carlo sweep over methods, SNRs and trials");
  std::string bench_config;
  std::string bench_out;
  bench->add_option("--config", bench_config, "JSON bench configuration")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench->add_option("--threads", threads, "Worker threads (default: ONEBIT_DOA_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "Solve one dataset record or score stored predictions");
  std::string solve_input;
  std::size_t solve_index = 0;
  std::string solve_method = "sbri";
  std::string solve_mode;
  std::string from_predictions;
  std::string solve_out;
  double solve_b = 0.5;
  double threshold = 2.0;
  solve->add_option("--input", solve_input, "Dataset directory or records.bin")->required();
  solve->add_option("--index", solve_index, "Record index");
  solve->add_option("--method", solve_method, "sbri, sbri_x or sbri_slim_prior");
  solve->add_option("--mode", solve_mode, "on_grid or off_grid (default: the dataset mode)");
  solve->add_option("--b", solve_b, "Logistic slope for sbri_x");
  solve->add_option("--from-predictions", from_predictions, "predictions.bin to score against --input");
  solve->add_option("--out", solve_out, "Directory for trials.csv and summary.csv when scoring predictions");
  solve->add_option("--hit-threshold", threshold, "Hit threshold in degrees");

  auto* simulate = app.add_subcommand("simulate", "Simulate and quantize one snapshot, optionally solve it");
  std::string sim_geometry = "sla18";
  std::vector<double> sim_doas{-30.0, 30.0};
  double sim_snr = 20.0;
  std::uint64_t sim_seed = 1;
  std::string sim_method;
  std::string sim_mode = "on_grid";
  double sim_spacing = 1.0;
  double sim_b = 0.5;
  simulate->add_option("--geometry", sim_geometry, "sla18, sla10, ulaN or a JSON positions file");
  simulate->add_option("--doas", sim_doas, "Source directions in degrees")->delimiter(',');
  simulate->add_option("--snr", sim_snr, "SNR in dB");
  simulate->add_option("--seed", sim_seed, "Random seed");
  simulate->add_option("--method", sim_method, "Solve with sbri, sbri_x or sbri_slim_prior");
  simulate->add_option("--mode", sim_mode, "on_grid or off_grid");
  simulate->add_option("--spacing", sim_spacing, "Grid spacing in degrees over [-60, 60]");
  simulate->add_option("--b", sim_b, "Logistic slope for sbri_x");

  auto* gen = app.add_subcommand("gen-dataset", "Generate a labelled training corpus");
  std::string gen_mode = "on_grid";
  std::size_t gen_count = 100000;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::string gen_labels = "signed";
  std::string gen_geometry = "sla18";
  gen->add_option("--mode", gen_mode, "on_grid or off_grid");
  gen->add_option("--count", gen_count, "Number of records")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--gap-labels", gen_labels, "signed or abs")->check(CLI::IsMember({"signed", "abs"}));
  gen->add_option("--geometry", gen_geometry, "sla18, sla10, ulaN or a JSON positions file");
  gen->add_option("--threads", threads, "Worker threads (default: ONEBIT_DOA_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  auto geometry_from = [](const std::string& text) {
    return text.ends_with(".json") ? od::ArrayGeometry::load(text) : od::ArrayGeometry::from_name(text);
  };

  try {
    if (bench->parsed()) return run_bench_cmd(bench_config, bench_out, threads);
    if (solve->parsed()) {
      if (!from_predictions.empty()) return run_score_predictions(solve_input, from_predictions, solve_out, threshold);
      return run_solve_cmd(solve_input, solve_index, solve_method, solve_mode, solve_b, threshold);
    }
    if (simulate->parsed()) {
      const od::ArrayGeometry geom = geometry_from(sim_geometry);
      std::mt19937_64 rng(sim_seed);
      od::Scene scene{sim_doas, {}};
      std::uniform_real_distribution<double> amp(0.5, 1.0);
      for (std::size_t k = 0; k < sim_doas.size(); ++k) {
        const double re = amp(rng);
        const double im = amp(rng);
        scene.amplitudes.emplace_back(re, im);
      }
      scene.validate(geom);
      const od::OneBitSnapshot ybar = od::one_bit_quantize(od::simulate_snapshot(geom, scene, sim_snr, rng));
      std::cout << "ybar:";
      for (const auto& v : ybar.ybar) std::cout << ' ' << (v.real() > 0 ? '+' : '-') << (v.imag() > 0 ? '+' : '-');
      std::cout << '\n';
      if (!sim_method.empty()) {
        const od::MethodSpec method = method_from_flags(sim_method, sim_mode, sim_b);
        const od::SteeringDictionary dict = od::build_dictionary(geom, od::AngleGrid{-60.0, 60.0, sim_spacing});
        report_solution(method, od::run_method(method, ybar, dict), dict, sim_doas, threshold);
      }
      return 0;
    }
    if (gen->parsed()) {
      od::DatasetSpec spec = od::default_dataset_spec(od::parse_solve_mode(gen_mode));
      spec.count = gen_count;
      spec.seed = gen_seed;
      spec.geometry = geometry_from(gen_geometry);
      od::Dataset data = od::generate_dataset(spec, od::resolve_threads(threads));
      if (gen_labels == "abs") od::convert_to_absolute_gaps(data);
      od::write_dataset(data, gen_out);
      std::cout << "records: " << data.records.size() << " (train " << data.manifest.train_count << ", val "
                << data.manifest.val_count << ")\n"
                << "record_bytes: " << data.manifest.record_bytes() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
