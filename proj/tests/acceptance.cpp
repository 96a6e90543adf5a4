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

// Acceptance runner. Usage: onebit_doa_acceptance [criterion ...]
// With no arguments every criterion runs. Prints one PASS/FAIL line each and
// exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "onebit_doa/dataset.hpp"
#include "onebit_doa/harness.hpp"
#include "onebit_doa/runtime.hpp"
#include "onebit_doa/sbri.hpp"
#include "onebit_doa/sbrix.hpp"
#include "onebit_doa/spectrum.hpp"
#include "oracles.hpp"

namespace od = onebit_doa;
namespace fs = std::filesystem;
using od::Complex;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

fs::path config_path(const char* name) { return fs::path(ONEBIT_DOA_CONFIG_DIR) / name; }

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> gap(-1.0, 1.0);
  const auto dict = od::build_dictionary(od::ArrayGeometry::sla18(), {-60, 60, 2});
  double worst = 0.0;
  od::SbriConfig prior;
  for (int t = 0; t < 100; ++t) {
    od::RVector beta(61);
    for (Eigen::Index n = 0; n < 61; ++n) beta[n] = od::deg_to_rad(gap(rng));
    const od::CMatrix D = t % 2 == 0 ? dict.A : od::offgrid_manifold(dict, beta);
    const od::CVector xk = od::oracle::random_vector(rng, 61) * std::pow(10.0, -(t % 4));
    const od::RVector w = od::prior_weights(xk, prior);
    const double gamma = 0.05 + 0.01 * t;

    // Probit form: (D^H D + gamma W) x = D^H v.
    const od::CVector v = od::oracle::random_vector(rng, 18);
    const od::CVector x1 = od::x_update(D, v, gamma, w);
    const od::CVector rhs1 = D.adjoint() * v;
    const od::CVector r1 = D.adjoint() * (D * x1) + gamma * w.asDiagonal() * x1 - rhs1;
    worst = std::max(worst, r1.norm() / rhs1.norm());

    // Logistic form: (D^H D + gamma/L W) x = D^H (D x_k + g).
    const double a = 1.0;
    const double b = t % 3 == 0 ? 0.1 : 0.5;
    const od::CVector g = od::oracle::random_vector(rng, 18);
    const od::CVector x2 = od::x_update_x(D, xk, g, gamma, w, a, b);
    const od::CVector rhs2 = D.adjoint() * (D * xk + g);
    const double reg = gamma * (a + 1) * (a + 1) / (a * b * b);
    const od::CVector r2 = D.adjoint() * (D * x2) + reg * w.asDiagonal() * x2 - rhs2;
    worst = std::max(worst, r2.norm() / rhs2.norm());
  }
  const double secs = elapsed_s(t0);
  return {worst <= 1e-8 && secs < 10.0,
          "max relative residual " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome criterion_2() {
  // (a) scalar quadratic bound of the logistic loss, a = 1.
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> probe(-20.0, 20.0);
  std::uniform_real_distribution<double> slope(0.05, 2.0);
  auto f_ref = [](long double s, long double b) { return std::log1p(std::exp(-b * s)); };
  int violations = 0;
  double anchor_gap = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const double b = slope(rng);
    const double s0 = probe(rng) / b;
    const double s = probe(rng) / b;
    const double L = od::link_curvature(1.0, b);
    const double d0 = od::link_loss_derivative(s0, 1.0, b);
    auto q = [&](double u) { return od::link_loss(s0, 1.0, b) + d0 * (u - s0) + 0.5 * L * (u - s0) * (u - s0); };
    const long double fs = f_ref(s, b);
    if (fs > q(s) + 1e-12L * std::max(1.0L, fs)) ++violations;
    anchor_gap = std::max(anchor_gap, static_cast<double>(std::abs(q(s0) - f_ref(s0, b))));
  }
  const bool part_a = violations == 0 && anchor_gap <= 1e-10;

  // (b) monotone objectives with gamma frozen.
  const auto geom = od::ArrayGeometry::sla18();
  const auto dict = od::build_dictionary(geom, {-60, 60, 2});
  std::uniform_real_distribution<double> angle(-55.0, 55.0);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::uniform_real_distribution<double> snr(0.0, 30.0);
  od::SbriConfig sc;
  sc.adapt_gamma = false;
  od::SbriXConfig xc;
  xc.base.adapt_gamma = false;
  int increases = 0;
  for (int t = 0; t < 50; ++t) {
    double d1 = angle(rng);
    double d2 = angle(rng);
    while (std::abs(d1 - d2) < 4.0) d2 = angle(rng);
    const od::Scene scene{{d1, d2}, {Complex(amp(rng), amp(rng)), Complex(amp(rng), amp(rng))}};
    const auto ybar = od::one_bit_quantize(od::simulate_snapshot(geom, scene, snr(rng), rng));
    for (const auto& res : {od::sbri_solve(ybar, dict, sc, od::SolveMode::on_grid),
                            od::sbrix_solve(ybar, dict, xc, od::SolveMode::on_grid)}) {
      for (std::size_t k = 1; k < res.objective_trace.size(); ++k) {
        const double prev = res.objective_trace[k - 1];
        if (res.objective_trace[k] > prev + 1e-6 * std::abs(prev)) ++increases;
      }
    }
  }
  const bool part_b = increases == 0;
  return {part_a && part_b, "(a) " + std::to_string(violations) + " bound violations, anchor gap " +
                                fmt("%.2g", anchor_gap) + "; (b) " + std::to_string(increases) +
                                " objective increases over 50 instances"};
}

std::map<std::string, std::vector<const od::SummaryRow*>> by_method(const od::BenchResult& r) {
  std::map<std::string, std::vector<const od::SummaryRow*>> out;
  for (const auto& row : r.summary) out[row.method].push_back(&row);
  return out;
}

Outcome criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = od::load_bench_config(config_path("ongrid_sla18.json"));
  const auto res = od::run_bench(cfg, od::resolve_threads(std::nullopt));
  const double secs = elapsed_s(t0);
  const auto rows = by_method(res);
  const auto& sbri = rows.at("sbri.on_grid");
  const auto& sbrix = rows.at("sbri_x.on_grid");

  bool monotone = true;
  for (const auto* series : {&sbri, &sbrix}) {
    for (std::size_t i = 1; i < series->size(); ++i) {
      if ((*series)[i]->metrics.hit_rate < (*series)[i - 1]->metrics.hit_rate - 0.03) monotone = false;
    }
  }
  double x_at_20 = -1.0;
  bool x_not_worse = true;
  std::ostringstream rates;
  for (std::size_t i = 0; i < sbri.size(); ++i) {
    const double s = sbri[i]->snr_db;
    if (s == 20.0) x_at_20 = sbrix[i]->metrics.hit_rate;
    if (s <= 15.0 && sbrix[i]->metrics.hit_rate < sbri[i]->metrics.hit_rate - 0.05) x_not_worse = false;
    rates << ' ' << s << "dB " << sbri[i]->metrics.hit_rate << '/' << sbrix[i]->metrics.hit_rate;
  }
  const bool pass = monotone && x_at_20 >= 0.95 && x_not_worse && secs < 300.0;
  return {pass, "hit rate sbri/sbri_x:" + rates.str() + "; " + fmt("%.1f", secs) + " s"};
}

Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = od::load_bench_config(config_path("offgrid_sla18.json"));
  std::vector<od::MethodSpec> keep;
  for (const auto& m : cfg.methods) {
    if (m.solver == od::SolverKind::sbri) keep.push_back(m);
  }
  cfg.methods = keep;
  const auto res = od::run_bench(cfg, od::resolve_threads(std::nullopt));
  const double secs = elapsed_s(t0);
  double on = NAN;
  double off = NAN;
  for (const auto& row : res.summary) {
    if (row.method == "sbri.on_grid") on = row.metrics.rmse_deg;
    if (row.method == "sbri.off_grid") off = row.metrics.rmse_deg;
  }
  const double floor = std::sqrt((0.28 * 0.28 + 0.56 * 0.56) / 2.0);
  const bool pass = on >= 0.40 && off < 0.40 && secs < 300.0;
  return {pass, "on-grid RMSE " + fmt("%.4f", on) + ", off-grid RMSE " + fmt("%.4f", off) + " (floor " +
                    fmt("%.4f", floor) + "), " + fmt("%.1f", secs) + " s"};
}

Outcome criterion_5() {
  const auto geom = od::ArrayGeometry::sla18();
  const auto dict = od::build_dictionary(geom, {-60, 60, 1});
  const od::Scene scene{{-30.0, 30.0}, {Complex(1, 0), Complex(0, 1)}};
  bool pass = true;
  std::string detail;
  for (double b : {0.1, 0.5}) {
    od::SbriXConfig cfg;
    cfg.b = b;
    cfg.base.t_max = 20;
    int ok = 0;
    double median_change = 0.0;
    std::vector<double> last;
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto ybar = od::one_bit_quantize(od::simulate_snapshot(geom, scene, 20.0, od::derive_seed(505, {t})));
      const auto res = od::sbrix_solve(ybar, dict, cfg, od::SolveMode::on_grid);
      if (res.converged && res.iterations <= 20) ++ok;
      if (!res.change_trace.empty()) last.push_back(res.change_trace.back());
    }
    if (!last.empty()) {
      std::nth_element(last.begin(), last.begin() + static_cast<long>(last.size() / 2), last.end());
      median_change = last[last.size() / 2];
    }
    pass = pass && ok >= 90;
    detail += "b=" + fmt("%.1f", b) + ": " + std::to_string(ok) + "/100 converged, median change at stop " +
              fmt("%.2g", median_change) + "; ";
  }
  return {pass, detail};
}

bool identical(const od::SolverResult& a, const od::SolverResult& b) {
  return a.x == b.x && a.beta_rad == b.beta_rad && a.eps == b.eps && a.iterations == b.iterations &&
         a.converged == b.converged && a.objective_trace == b.objective_trace && a.change_trace == b.change_trace &&
         a.gap_warnings == b.gap_warnings;
}

Outcome criterion_6() {
  const auto geom = od::ArrayGeometry::sla18();
  const auto dict = od::build_dictionary(geom, {-60, 60, 2});
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> angle(-55.0, 55.0);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    double d1 = angle(rng);
    double d2 = angle(rng);
    while (std::abs(d1 - d2) < 4.0) d2 = angle(rng);
    const od::Scene scene{{d1, d2}, {Complex(amp(rng), amp(rng)), Complex(amp(rng), amp(rng))}};
    const auto snap = od::simulate_snapshot(geom, scene, 10.0, rng);
    const od::SolveMode mode = t % 2 == 0 ? od::SolveMode::off_grid : od::SolveMode::on_grid;
    const auto ref_q = od::one_bit_quantize(snap);
    const auto ref_a = od::sbri_solve(ref_q, dict, {}, mode);
    const auto ref_b = od::sbrix_solve(ref_q, dict, {}, mode);
    for (double c : {1e-3, 1.0, 1e3}) {
      const auto q = od::one_bit_quantize(od::CVector(c * snap.y));
      if (!identical(od::sbri_solve(q, dict, {}, mode), ref_a)) ++mismatches;
      if (!identical(od::sbrix_solve(q, dict, {}, mode), ref_b)) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatching results over 600 solves"};
}

Outcome criterion_7() {
  auto spec = od::default_dataset_spec(od::SolveMode::off_grid);
  spec.count = 5000;
  spec.seed = 707;
  const auto ds = od::generate_dataset(spec, od::resolve_threads(std::nullopt));
  std::vector<double> gaps;
  int bad_sparsity = 0;
  const double r = spec.grid.spacing_deg;
  for (const auto& rec : ds.records) {
    int support = 0;
    for (std::size_t n = 0; n < rec.s_star.size(); ++n) {
      if (rec.s_star[n] != 0.0F) {
        ++support;
        gaps.push_back(rec.beta_star[n]);
      }
    }
    if (support != 2) ++bad_sparsity;
  }
  const auto chi = od::oracle::uniform_chi_square(gaps, -r / 2.0, r / 2.0, 20);

  const fs::path dir = fs::temp_directory_path() / "onebit_doa_acceptance_c7";
  fs::remove_all(dir);
  od::write_dataset(ds, dir);
  const auto back = od::read_dataset(dir);
  const bool round_trip = back.records == ds.records && back.manifest.record_count == ds.records.size();
  std::ifstream a(dir / "records.bin", std::ios::binary);
  const std::string bytes1((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const fs::path dir2 = dir.string() + "_again";
  fs::remove_all(dir2);
  od::write_dataset(back, dir2);
  std::ifstream b(dir2 / "records.bin", std::ios::binary);
  const std::string bytes2((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  const bool bytes_equal = bytes1 == bytes2;

  const bool pass = chi.statistic < chi.critical && bad_sparsity == 0 && round_trip && bytes_equal;
  return {pass, "chi2 " + fmt("%.2f", chi.statistic) + " < " + fmt("%.2f", chi.critical) + ", " +
                    std::to_string(bad_sparsity) + " records with support != 2, round trip " +
                    (round_trip && bytes_equal ? "identical" : "differs")};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {(std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()};
}

Outcome criterion_8() {
  auto cfg = od::load_bench_config(config_path("offgrid_sla18.json"));
  cfg.trials = 40;
  cfg.trace_trials = 2;
  const fs::path base = fs::temp_directory_path() / "onebit_doa_acceptance_c8";
  fs::remove_all(base);
  od::write_bench_outputs(od::run_bench(cfg, 1), cfg, base / "serial");
  od::write_bench_outputs(od::run_bench(cfg, 4), cfg, base / "parallel");
  bool same = true;
  std::string detail;
  for (const char* f : {"trials.csv", "summary.csv", "traces.csv"}) {
    const std::string s = read_file(base / "serial" / f);
    const bool eq = !s.empty() && s == read_file(base / "parallel" / f);
    same = same && eq;
    detail += std::string(f) + (eq ? " identical; " : " differs; ");
  }
  return {same, detail + "serial vs 4 threads"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                       criterion_5, criterion_6, criterion_7, criterion_8};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 8; ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
