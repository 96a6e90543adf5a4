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

#include "onebit_doa/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "onebit_doa/runtime.hpp"

namespace onebit_doa {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestName = "manifest";
constexpr const char* kRecordsName = "records.bin";

void put_f32(std::vector<unsigned char>& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xFFU));
}

float get_f32(const unsigned char* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

void put_all(std::vector<unsigned char>& out, const std::vector<float>& values) {
  for (float v : values) put_f32(out, v);
}

std::vector<float> get_n(const unsigned char*& p, std::size_t n) {
  std::vector<float> values(n);
  for (std::size_t i = 0; i < n; ++i, p += 4) values[i] = get_f32(p);
  return values;
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string gap_mode_name(GapLabelMode mode) {
  return mode == GapLabelMode::signed_gaps ? "signed" : "absolute";
}

fs::path dataset_dir(const fs::path& path) {
  return fs::is_directory(path) ? path : path.parent_path();
}

}  // namespace

SceneSample sample_scene(std::mt19937_64& rng, SolveMode mode, const AngleGrid& grid, std::size_t sources) {
  const std::size_t n = grid.size();
  if (sources == 0 || sources > n) throw std::invalid_argument("invalid number of sources for the grid");
  std::uniform_int_distribution<std::size_t> cell(0, n - 1);
  std::uniform_real_distribution<double> gap(-grid.spacing_deg / 2.0, grid.spacing_deg / 2.0);
  std::uniform_real_distribution<double> amp(0.5, 1.0);

  SceneSample sample;
  while (sample.grid_indices.size() < sources) {
    const std::size_t idx = cell(rng);
    if (std::find(sample.grid_indices.begin(), sample.grid_indices.end(), idx) == sample.grid_indices.end()) {
      sample.grid_indices.push_back(idx);
    }
  }
  std::sort(sample.grid_indices.begin(), sample.grid_indices.end());
  for (std::size_t idx : sample.grid_indices) {
    const double g = mode == SolveMode::off_grid ? gap(rng) : 0.0;
    sample.gaps_deg.push_back(g);
    sample.scene.doas_deg.push_back(grid.angle_deg(idx) + g);
  }
  for (std::size_t k = 0; k < sources; ++k) {
    const double re = amp(rng);
    const double im = amp(rng);
    sample.scene.amplitudes.emplace_back(re, im);
  }
  return sample;
}

DatasetRecord make_record(const SceneSample& sample, double snr_db, const ArrayGeometry& geometry,
                          const AngleGrid& grid, std::mt19937_64& rng, GapLabelMode labels) {
  const Snapshot snap = simulate_snapshot(geometry, sample.scene, snr_db, rng);
  const OneBitSnapshot q = one_bit_quantize(snap);
  const std::size_t m_count = geometry.size();
  const std::size_t n = grid.size();

  DatasetRecord rec;
  rec.ybar_real.resize(2 * m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    rec.ybar_real[m] = static_cast<float>(q.ybar[static_cast<Eigen::Index>(m)].real());
    rec.ybar_real[m_count + m] = static_cast<float>(q.ybar[static_cast<Eigen::Index>(m)].imag());
  }
  rec.s_star.assign(n, 0.0F);
  rec.beta_star.assign(n, 0.0F);
  for (std::size_t k = 0; k < sample.scene.size(); ++k) {
    const std::size_t idx = sample.grid_indices[k];
    rec.s_star[idx] = static_cast<float>(std::abs(sample.scene.amplitudes[k]));
    const double g = sample.gaps_deg[k];
    rec.beta_star[idx] = static_cast<float>(labels == GapLabelMode::absolute_gaps ? std::abs(g) : g);
  }
  rec.snr_db = static_cast<float>(snr_db);
  std::vector<double> doas = sample.scene.doas_deg;
  std::sort(doas.begin(), doas.end());
  for (double d : doas) rec.truth_doas.push_back(static_cast<float>(d));
  return rec;
}

DatasetSpec default_dataset_spec(SolveMode mode) {
  DatasetSpec spec;
  spec.mode = mode;
  spec.grid = AngleGrid{-60.0, 60.0, mode == SolveMode::on_grid ? 1.0 : 2.0};
  return spec;
}

Dataset generate_dataset(const DatasetSpec& spec, unsigned threads) {
  if (spec.count == 0) throw std::invalid_argument("dataset needs at least one record");
  if (spec.snr_levels_db.empty()) throw std::invalid_argument("dataset needs at least one SNR level");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction <= 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1]");
  }
  std::vector<DatasetRecord> generated(spec.count);
  parallel_for(spec.count, threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(spec.seed, {i}));
    const SceneSample sample = sample_scene(rng, spec.mode, spec.grid, spec.sources);
    const double snr = spec.snr_levels_db[i % spec.snr_levels_db.size()];
    generated[i] = make_record(sample, snr, spec.geometry, spec.grid, rng, spec.gap_labels);
  });

  std::vector<std::size_t> order(spec.count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(derive_seed(spec.seed, {~std::uint64_t{0}}));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  Dataset ds;
  ds.records.reserve(spec.count);
  for (std::size_t i : order) ds.records.push_back(std::move(generated[i]));

  DatasetManifest& m = ds.manifest;
  m.mode = spec.mode;
  m.sensors = spec.geometry.size();
  m.grid_size = spec.grid.size();
  m.sources = spec.sources;
  m.grid = spec.grid;
  m.positions.assign(spec.geometry.positions().begin(), spec.geometry.positions().end());
  m.record_count = spec.count;
  m.train_fraction = spec.train_fraction;
  m.train_count = std::min(spec.count, static_cast<std::size_t>(std::llround(spec.train_fraction *
                                                                             static_cast<double>(spec.count))));
  m.val_count = spec.count - m.train_count;
  m.seed = spec.seed;
  m.snr_levels_db = spec.snr_levels_db;
  m.gap_labels = spec.gap_labels;
  return ds;
}

void convert_to_absolute_gaps(Dataset& dataset) {
  for (DatasetRecord& rec : dataset.records) {
    for (float& b : rec.beta_star) b = std::abs(b);
  }
  dataset.manifest.gap_labels = GapLabelMode::absolute_gaps;
}

void write_dataset(const Dataset& dataset, const fs::path& dir) {
  const DatasetManifest& m = dataset.manifest;
  if (dataset.records.size() != m.record_count) {
    throw std::invalid_argument("manifest record_count does not match the number of records");
  }
  fs::create_directories(dir);

  nlohmann::ordered_json doc;
  doc["format_version"] = m.format_version;
  doc["mode"] = to_string(m.mode);
  doc["M"] = m.sensors;
  doc["N"] = m.grid_size;
  doc["K"] = m.sources;
  doc["grid"] = {{"lo_deg", m.grid.lo_deg}, {"hi_deg", m.grid.hi_deg}, {"spacing_deg", m.grid.spacing_deg}};
  doc["positions"] = m.positions;
  doc["record_count"] = m.record_count;
  doc["record_bytes"] = m.record_bytes();
  doc["encoding"] = "float32-le";
  doc["layout"] = {"ybar_real[2M]", "s_star[N]", "beta_star[N]", "snr_db[1]", "truth_doas[K]"};
  doc["split"] = {{"train_fraction", m.train_fraction},
                  {"val_fraction", 1.0 - m.train_fraction},
                  {"train_count", m.train_count},
                  {"val_count", m.val_count}};
  doc["seed"] = m.seed;
  doc["snr_levels_db"] = m.snr_levels_db;
  doc["gap_labels"] = gap_mode_name(m.gap_labels);
  {
    std::ofstream out(dir / kManifestName, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << doc.dump(2) << '\n';
  }

  std::vector<unsigned char> bytes;
  bytes.reserve(m.record_bytes() * m.record_count);
  for (const DatasetRecord& rec : dataset.records) {
    if (rec.ybar_real.size() != 2 * m.sensors || rec.s_star.size() != m.grid_size ||
        rec.beta_star.size() != m.grid_size || rec.truth_doas.size() != m.sources) {
      throw std::invalid_argument("record shape does not match the manifest");
    }
    put_all(bytes, rec.ybar_real);
    put_all(bytes, rec.s_star);
    put_all(bytes, rec.beta_star);
    put_f32(bytes, rec.snr_db);
    put_all(bytes, rec.truth_doas);
  }
  write_bytes(dir / kRecordsName, bytes);
}

DatasetManifest read_manifest(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kManifestName : path;
  std::ifstream in(file);
  if (!in) throw FormatError("cannot open manifest " + file.string());
  DatasetManifest m;
  try {
    nlohmann::json doc;
    in >> doc;
    m.format_version = doc.at("format_version").get<int>();
    if (m.format_version != kDatasetFormatVersion) {
      throw FormatError("unsupported dataset format_version " + std::to_string(m.format_version));
    }
    m.mode = parse_solve_mode(doc.at("mode").get<std::string>());
    m.sensors = doc.at("M").get<std::size_t>();
    m.grid_size = doc.at("N").get<std::size_t>();
    m.sources = doc.at("K").get<std::size_t>();
    const auto& g = doc.at("grid");
    m.grid = AngleGrid{g.at("lo_deg").get<double>(), g.at("hi_deg").get<double>(), g.at("spacing_deg").get<double>()};
    m.positions = doc.at("positions").get<std::vector<double>>();
    m.record_count = doc.at("record_count").get<std::size_t>();
    const auto& split = doc.at("split");
    m.train_fraction = split.at("train_fraction").get<double>();
    m.train_count = split.at("train_count").get<std::size_t>();
    m.val_count = split.at("val_count").get<std::size_t>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.snr_levels_db = doc.at("snr_levels_db").get<std::vector<double>>();
    m.gap_labels = doc.at("gap_labels").get<std::string>() == "absolute" ? GapLabelMode::absolute_gaps
                                                                          : GapLabelMode::signed_gaps;
    if (doc.contains("record_bytes") && doc["record_bytes"].get<std::size_t>() != m.record_bytes()) {
      throw FormatError("manifest record_bytes disagrees with M, N and K");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed manifest " + file.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError("malformed manifest " + file.string() + ": " + e.what());
  }
  if (m.positions.size() != m.sensors) throw FormatError("manifest positions do not match M");
  if (m.grid.size() != m.grid_size) throw FormatError("manifest grid does not match N");
  if (m.train_count + m.val_count != m.record_count) throw FormatError("manifest split does not add up");
  return m;
}

Dataset read_dataset(const fs::path& path) {
  const fs::path dir = dataset_dir(path);
  Dataset ds;
  ds.manifest = read_manifest(dir);
  const DatasetManifest& m = ds.manifest;
  const std::vector<unsigned char> bytes = read_bytes(dir / kRecordsName);
  const std::size_t stride = m.record_bytes();
  if (bytes.size() % stride != 0) {
    throw FormatError("records.bin is truncated: " + std::to_string(bytes.size()) + " bytes is not a multiple of " +
                      std::to_string(stride));
  }
  if (bytes.size() / stride != m.record_count) {
    throw FormatError("records.bin holds " + std::to_string(bytes.size() / stride) + " records, manifest says " +
                      std::to_string(m.record_count));
  }
  ds.records.reserve(m.record_count);
  const unsigned char* p = bytes.data();
  for (std::size_t r = 0; r < m.record_count; ++r) {
    DatasetRecord rec;
    rec.ybar_real = get_n(p, 2 * m.sensors);
    rec.s_star = get_n(p, m.grid_size);
    rec.beta_star = get_n(p, m.grid_size);
    rec.snr_db = get_f32(p);
    p += 4;
    rec.truth_doas = get_n(p, m.sources);
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

OneBitSnapshot record_snapshot(const DatasetRecord& record) {
  const std::size_t m_count = record.ybar_real.size() / 2;
  CVector y(static_cast<Eigen::Index>(m_count));
  for (std::size_t m = 0; m < m_count; ++m) {
    y[static_cast<Eigen::Index>(m)] = Complex(record.ybar_real[m], record.ybar_real[m_count + m]);
  }
  return OneBitSnapshot::from_values(std::move(y));
}

void write_predictions(const std::vector<Prediction>& predictions, std::size_t grid_size, const fs::path& path) {
  std::vector<unsigned char> bytes;
  bytes.reserve(predictions.size() * grid_size * 8);
  for (const Prediction& p : predictions) {
    if (p.spectrum.size() != grid_size || p.gaps_deg.size() != grid_size) {
      throw std::invalid_argument("prediction shape does not match the grid size");
    }
    put_all(bytes, p.spectrum);
    put_all(bytes, p.gaps_deg);
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_bytes(path, bytes);
}

std::vector<Prediction> read_predictions(const fs::path& path, std::size_t grid_size) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  const std::size_t stride = 8 * grid_size;
  if (stride == 0 || bytes.size() % stride != 0) {
    throw FormatError("predictions file " + path.string() + " is truncated or has the wrong grid size");
  }
  std::vector<Prediction> out(bytes.size() / stride);
  const unsigned char* p = bytes.data();
  for (Prediction& pred : out) {
    pred.spectrum = get_n(p, grid_size);
    pred.gaps_deg = get_n(p, grid_size);
  }
  return out;
}

}  // namespace onebit_doa
