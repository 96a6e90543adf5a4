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

#include "onebit_doa/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "onebit_doa/runtime.hpp"

namespace onebit_doa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double round_to_csv(double value) { return std::strtod(format_value(value).c_str(), nullptr); }

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string file_safe(const std::string& label) {
  std::string out;
  for (char c : label) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  return out;
}

template <typename T>
void set_if(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_sbri_params(const json& p, SbriConfig& cfg) {
  set_if(p, "alpha", cfg.alpha);
  set_if(p, "eta", cfg.eta);
  set_if(p, "gamma0", cfg.gamma0);
  set_if(p, "t_max", cfg.t_max);
  set_if(p, "eps0", cfg.eps0);
  set_if(p, "slim_epsilon", cfg.slim_epsilon);
  set_if(p, "adapt_gamma", cfg.adapt_gamma);
  set_if(p, "active_fraction", cfg.active_fraction);
  set_if(p, "record_objective", cfg.record_objective);
}

ArrayGeometry parse_geometry(const json& g) {
  if (g.is_string()) return ArrayGeometry::from_name(g.get<std::string>());
  if (g.is_array()) return ArrayGeometry(g.get<std::vector<double>>());
  if (g.is_object()) return ArrayGeometry(g.at("positions").get<std::vector<double>>());
  throw std::invalid_argument("geometry must be a name, an offset array or {\"positions\": [...]}");
}

MethodSpec parse_method(const json& j) {
  MethodSpec m = MethodSpec::make(parse_solver_kind(j.at("solver").get<std::string>()),
                                  parse_solve_mode(j.value("mode", std::string("on_grid"))),
                                  j.value("label", std::string()));
  if (j.contains("params")) {
    const json& p = j.at("params");
    apply_sbri_params(p, m.sbri);
    apply_sbri_params(p, m.sbrix.base);
    set_if(p, "a", m.sbrix.a);
    set_if(p, "b", m.sbrix.b);
    if (p.contains("beta_update_variant")) {
      const auto v = p.at("beta_update_variant").get<std::string>();
      if (v == "delta_x") {
        m.sbrix.beta_variant = BetaUpdateVariant::delta_x;
      } else if (v == "absolute_x") {
        m.sbrix.beta_variant = BetaUpdateVariant::absolute_x;
      } else {
        throw std::invalid_argument("unknown beta_update_variant '" + v + "'");
      }
    }
  }
  if (m.solver == SolverKind::sbri_slim_prior) m.sbri.prior_mode = PriorMode::slim;
  return m;
}

}  // namespace

std::string format_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::sbri:
      return "sbri";
    case SolverKind::sbri_x:
      return "sbri_x";
    case SolverKind::sbri_slim_prior:
      return "sbri_slim_prior";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "sbri") return SolverKind::sbri;
  if (text == "sbri_x" || text == "sbrix") return SolverKind::sbri_x;
  if (text == "sbri_slim_prior" || text == "slim") return SolverKind::sbri_slim_prior;
  throw std::invalid_argument("unknown solver '" + text + "' (expected sbri, sbri_x or sbri_slim_prior)");
}

MethodSpec MethodSpec::make(SolverKind solver, SolveMode mode, std::string label) {
  MethodSpec m;
  m.solver = solver;
  m.mode = mode;
  m.label = label.empty() ? to_string(solver) + "." + to_string(mode) : std::move(label);
  if (solver == SolverKind::sbri_slim_prior) m.sbri.prior_mode = PriorMode::slim;
  return m;
}

void BenchConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("bench needs at least one trial");
  if (snr_db.empty()) throw std::invalid_argument("bench needs at least one SNR");
  if (methods.empty()) throw std::invalid_argument("bench needs at least one method");
  if (!(hit_threshold_deg > 0.0)) throw std::invalid_argument("hit threshold must be positive");
  if (!amplitudes.empty() && amplitudes.size() != doas_deg.size()) {
    throw std::invalid_argument("scenario amplitudes must match the number of DOAs");
  }
  Scene probe{doas_deg, std::vector<Complex>(doas_deg.size(), Complex(1.0, 0.0))};
  probe.validate(geometry);
  (void)grid.size();
  std::map<std::string, int> labels;
  for (const MethodSpec& m : methods) {
    if (++labels[m.label] > 1) throw std::invalid_argument("duplicate method label '" + m.label + "'");
    m.sbri.validate();
    m.sbrix.validate();
  }
}

BenchConfig parse_bench_config(std::string_view json_text) {
  BenchConfig cfg;
  try {
    const json doc = json::parse(json_text);
    if (doc.contains("geometry")) cfg.geometry = parse_geometry(doc.at("geometry"));
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      cfg.grid = AngleGrid{g.value("lo_deg", -60.0), g.value("hi_deg", 60.0), g.value("spacing_deg", 1.0)};
    }
    if (doc.contains("scenario")) {
      const json& s = doc.at("scenario");
      cfg.doas_deg = s.at("doas_deg").get<std::vector<double>>();
      cfg.amplitudes.clear();
      if (s.contains("amplitudes") && !s.at("amplitudes").is_null()) {
        for (const json& a : s.at("amplitudes")) {
          cfg.amplitudes.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        }
      }
    }
    set_if(doc, "snr_db", cfg.snr_db);
    set_if(doc, "trials", cfg.trials);
    set_if(doc, "seed", cfg.seed);
    set_if(doc, "hit_threshold_deg", cfg.hit_threshold_deg);
    set_if(doc, "trace_trials", cfg.trace_trials);
    cfg.methods.clear();
    for (const json& m : doc.at("methods")) cfg.methods.push_back(parse_method(m));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bench config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_bench_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open bench config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_bench_config(ss.str());
}

SolverResult run_method(const MethodSpec& method, const OneBitSnapshot& ybar, const SteeringDictionary& dict) {
  switch (method.solver) {
    case SolverKind::sbri:
    case SolverKind::sbri_slim_prior:
      return sbri_solve(ybar, dict, method.sbri, method.mode);
    case SolverKind::sbri_x:
      return sbrix_solve(ybar, dict, method.sbrix, method.mode);
  }
  throw std::logic_error("unhandled solver kind");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial) {
  return derive_seed(master, {snr_index, trial});
}

BenchResult run_bench(const BenchConfig& cfg, unsigned threads) {
  cfg.validate();
  const SteeringDictionary dict = build_dictionary(cfg.geometry, cfg.grid);
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_snr = cfg.snr_db.size();
  const std::size_t n_trials = cfg.trials;
  const auto targets = static_cast<int>(cfg.doas_deg.size());

  std::vector<TrialRow> rows(n_methods * n_snr * n_trials);
  std::vector<std::optional<TraceRecord>> traces(rows.size());
  auto slot = [&](std::size_t m, std::size_t s, std::size_t t) { return (m * n_snr + s) * n_trials + t; };

  parallel_for(n_snr * n_trials, threads, [&](std::size_t task) {
    const std::size_t s = task / n_trials;
    const std::size_t t = task % n_trials;
    std::mt19937_64 rng(trial_seed(cfg.seed, s, t));
    Scene scene{cfg.doas_deg, cfg.amplitudes};
    if (scene.amplitudes.empty()) {
      std::uniform_real_distribution<double> amp(0.5, 1.0);
      for (std::size_t k = 0; k < cfg.doas_deg.size(); ++k) {
        const double re = amp(rng);
        const double im = amp(rng);
        scene.amplitudes.emplace_back(re, im);
      }
    }
    const OneBitSnapshot ybar = one_bit_quantize(simulate_snapshot(cfg.geometry, scene, cfg.snr_db[s], rng));

    for (std::size_t m = 0; m < n_methods; ++m) {
      const MethodSpec& method = cfg.methods[m];
      TrialRow& row = rows[slot(m, s, t)];
      row.method = method.label;
      row.snr_db = cfg.snr_db[s];
      row.trial = t;
      const auto start = std::chrono::steady_clock::now();
      try {
        const SolverResult res = run_method(method, ybar, dict);
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        const DoaEstimate est = estimate_doas(dict, res.x, res.beta_rad, targets);
        const TrialScore score = score_trial(est, cfg.doas_deg, cfg.hit_threshold_deg);
        row.hit = score.hit;
        for (double e : est.angles_deg) row.estimates_deg.push_back(round_to_csv(e));
        for (double e : score.errors_deg) row.errors_deg.push_back(round_to_csv(e));
        row.sq_err_sum = round_to_csv(score.sq_err_sum);
        row.iterations = res.iterations;
        row.converged = res.converged;
        if (t < cfg.trace_trials) {
          traces[slot(m, s, t)] = TraceRecord{method.label, cfg.snr_db[s], t, res.objective_trace, res.change_trace};
        }
      } catch (const NumericalError& e) {
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        row.hit = false;
        row.error = sanitize(e.what());
      }
    }
  });

  BenchResult result;
  result.trials = std::move(rows);
  result.summary = summarize_rows(result.trials, cfg.doas_deg.size());
  for (auto& tr : traces) {
    if (tr) result.traces.push_back(std::move(*tr));
  }
  return result;
}

std::vector<SummaryRow> summarize_rows(const std::vector<TrialRow>& rows, std::size_t targets) {
  std::vector<SummaryRow> out;
  std::map<std::pair<std::string, double>, std::size_t> index;
  std::vector<std::vector<TrialScore>> scores;
  std::vector<double> iteration_sums;
  for (const TrialRow& r : rows) {
    const auto key = std::make_pair(r.method, r.snr_db);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back(SummaryRow{r.method, r.snr_db, {}, 0.0, 0});
      scores.emplace_back();
      iteration_sums.push_back(0.0);
    }
    const std::size_t i = it->second;
    scores[i].push_back(TrialScore{r.hit, r.sq_err_sum, r.errors_deg});
    iteration_sums[i] += r.iterations;
    if (!r.error.empty()) ++out[i].failures;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].metrics = summarize_scores(scores[i], targets);
    out[i].mean_iterations = iteration_sums[i] / static_cast<double>(scores[i].size());
  }
  return out;
}

void write_trials_csv(const std::vector<TrialRow>& rows, std::size_t targets, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "method,snr_db,trial,hit";
  for (std::size_t k = 1; k <= targets; ++k) out << ",est_" << k;
  for (std::size_t k = 1; k <= targets; ++k) out << ",err_" << k;
  out << ",sq_err_sum,iterations,converged,error\n";
  const std::string nan = format_value(std::nan(""));
  for (const TrialRow& r : rows) {
    out << r.method << ',' << format_value(r.snr_db) << ',' << r.trial << ',' << (r.hit ? 1 : 0);
    for (std::size_t k = 0; k < targets; ++k) {
      out << ',' << (k < r.estimates_deg.size() ? format_value(r.estimates_deg[k]) : nan);
    }
    for (std::size_t k = 0; k < targets; ++k) {
      out << ',' << (k < r.errors_deg.size() ? format_value(r.errors_deg[k]) : nan);
    }
    out << ',' << format_value(r.sq_err_sum) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << r.error << '\n';
  }
}

std::vector<TrialRow> read_trials_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trials file " + path.string());
  const auto header = split_csv_line(line);
  std::size_t targets = 0;
  for (const auto& h : header) {
    if (h.starts_with("est_")) ++targets;
  }
  const std::size_t expected = 4 + 2 * targets + 4;
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != expected) throw FormatError("trials row has " + std::to_string(f.size()) + " fields");
    TrialRow r;
    r.method = f[0];
    r.snr_db = std::stod(f[1]);
    r.trial = std::stoul(f[2]);
    r.hit = f[3] == "1";
    for (std::size_t k = 0; k < targets; ++k) {
      const double e = std::strtod(f[4 + k].c_str(), nullptr);
      if (!std::isnan(e)) r.estimates_deg.push_back(e);
    }
    for (std::size_t k = 0; k < targets; ++k) {
      const double e = std::strtod(f[4 + targets + k].c_str(), nullptr);
      if (!std::isnan(e)) r.errors_deg.push_back(e);
    }
    r.sq_err_sum = std::strtod(f[4 + 2 * targets].c_str(), nullptr);
    r.iterations = std::stoi(f[5 + 2 * targets]);
    r.converged = f[6 + 2 * targets] == "1";
    r.error = f[7 + 2 * targets];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "method,snr_db,trials,hits,hit_rate,rmse_deg,mean_iterations,failures\n";
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << format_value(r.snr_db) << ',' << r.metrics.trials << ',' << r.metrics.hits << ','
        << format_value(r.metrics.hit_rate) << ',' << format_value(r.metrics.rmse_deg) << ','
        << format_value(r.mean_iterations) << ',' << r.failures << '\n';
  }
}

std::vector<fs::path> emit_report(const std::vector<SummaryRow>& summary, const std::vector<std::string>& metrics,
                                  const fs::path& dir) {
  auto metric_value = [](const SummaryRow& r, const std::string& metric) {
    if (metric == "rmse_deg") return r.metrics.rmse_deg;
    if (metric == "hit_rate") return r.metrics.hit_rate;
    if (metric == "mean_iterations") return r.mean_iterations;
    throw std::invalid_argument("unknown report metric '" + metric + "'");
  };

  std::vector<std::string> methods;
  for (const SummaryRow& r : summary) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }

  std::vector<fs::path> written;
  for (const std::string& metric : metrics) {
    for (const std::string& method : methods) {
      const fs::path file = dir / "series" / (metric + "__" + file_safe(method) + ".dat");
      std::ofstream out = open_out(file);
      out << "# snr_db " << metric << '\n';
      for (const SummaryRow& r : summary) {
        if (r.method == method) out << format_value(r.snr_db) << ' ' << format_value(metric_value(r, metric)) << '\n';
      }
      written.push_back(file);
    }
  }

  std::ofstream md = open_out(dir / "report.md");
  md << "| method | SNR (dB) | trials | hit rate | RMSE (deg) | mean iterations | failures |\n";
  md << "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const SummaryRow& r : summary) {
    md << "| " << r.method << " | " << format_value(r.snr_db) << " | " << r.metrics.trials << " | "
       << format_value(r.metrics.hit_rate) << " | " << format_value(r.metrics.rmse_deg) << " | "
       << format_value(r.mean_iterations) << " | " << r.failures << " |\n";
  }
  return written;
}

void write_bench_outputs(const BenchResult& result, const BenchConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  write_trials_csv(result.trials, cfg.doas_deg.size(), dir / "trials.csv");
  write_summary_csv(result.summary, dir / "summary.csv");
  {
    std::ofstream out = open_out(dir / "timing.csv");
    out << "method,snr_db,trial,wall_time_ms\n";
    for (const TrialRow& r : result.trials) {
      out << r.method << ',' << format_value(r.snr_db) << ',' << r.trial << ',' << format_value(r.wall_time_ms)
          << '\n';
    }
  }
  if (!result.traces.empty()) {
    std::ofstream out = open_out(dir / "traces.csv");
    out << "method,snr_db,trial,iteration,objective,rel_change\n";
    for (const TraceRecord& t : result.traces) {
      for (std::size_t i = 0; i < t.objective.size(); ++i) {
        // iteration 0 is the matched-filter start and has no change entry.
        const std::string change = i == 0 || i - 1 >= t.change.size() ? "" : format_value(t.change[i - 1]);
        out << t.method << ',' << format_value(t.snr_db) << ',' << t.trial << ',' << i << ','
            << format_value(t.objective[i]) << ',' << change << '\n';
      }
    }
  }
  emit_report(result.summary, {"rmse_deg", "hit_rate"}, dir);
}

}  // namespace onebit_doa
