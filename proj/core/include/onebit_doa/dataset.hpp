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
#include <random>
#include <vector>

#include "onebit_doa/array_model.hpp"

namespace onebit_doa {

inline constexpr int kDatasetFormatVersion = 1;

/// Sign convention of stored gap labels.
enum class GapLabelMode {
  signed_gaps,    ///< theta_k - grid[n_k]
  absolute_gaps,  ///< |theta_k - grid[n_k]|
};

/// One labelled training example. Stored as fixed-stride little-endian
/// float32 in field order.
struct DatasetRecord {
  std::vector<float> ybar_real;   ///< 2M entries, [Re ybar; Im ybar], each +-1
  std::vector<float> s_star;      ///< N entries, |s_k| at the source bins
  std::vector<float> beta_star;   ///< N entries, gap labels in degrees
  float snr_db = 0.0F;
  std::vector<float> truth_doas;  ///< K entries, degrees, ascending

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct DatasetManifest {
  int format_version = kDatasetFormatVersion;
  SolveMode mode = SolveMode::on_grid;
  std::size_t sensors = 0;   ///< M
  std::size_t grid_size = 0; ///< N
  std::size_t sources = 0;   ///< K
  AngleGrid grid;
  std::vector<double> positions;
  std::size_t record_count = 0;
  double train_fraction = 0.9;
  std::size_t train_count = 0;
  std::size_t val_count = 0;
  std::uint64_t seed = 0;
  std::vector<double> snr_levels_db;
  GapLabelMode gap_labels = GapLabelMode::signed_gaps;

  /// 4 (2M + 2N + 1 + K)
  std::size_t record_bytes() const noexcept { return 4 * (2 * sensors + 2 * grid_size + 1 + sources); }
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<DatasetRecord> records;
};

/// Random scene plus the grid cells and gaps it was built from.
struct SceneSample {
  Scene scene;
  std::vector<std::size_t> grid_indices;
  std::vector<double> gaps_deg;
};

/// Draws `sources` distinct grid cells; on-grid DOAs sit on the grid points,
/// off-grid DOAs add a gap ~ U(-r/2, r/2). Amplitudes have Re, Im ~ U(0.5, 1).
SceneSample sample_scene(std::mt19937_64& rng, SolveMode mode, const AngleGrid& grid, std::size_t sources = 2);

/// Simulates, quantizes and labels one scene.
DatasetRecord make_record(const SceneSample& sample, double snr_db, const ArrayGeometry& geometry,
                          const AngleGrid& grid, std::mt19937_64& rng,
                          GapLabelMode labels = GapLabelMode::signed_gaps);

struct DatasetSpec {
  SolveMode mode = SolveMode::on_grid;
  std::size_t count = 100000;
  std::uint64_t seed = 1;
  ArrayGeometry geometry = ArrayGeometry::sla18();
  AngleGrid grid;
  std::size_t sources = 2;
  std::vector<double> snr_levels_db{0, 5, 10, 15, 20, 25, 30};
  GapLabelMode gap_labels = GapLabelMode::signed_gaps;
  double train_fraction = 0.9;
};

/// Grid defaults: 1 deg spacing on-grid, 2 deg off-grid, over [-60, 60].
DatasetSpec default_dataset_spec(SolveMode mode);

/// Record i is drawn from a generator seeded by (seed, i) and uses SNR level
/// i mod L; the records are then put in a seeded random order so that the
/// first train_count form the training split.
Dataset generate_dataset(const DatasetSpec& spec, unsigned threads = 1);

/// Rewrites signed gap labels as magnitudes.
void convert_to_absolute_gaps(Dataset& dataset);

/// Writes `manifest` (JSON text) and `records.bin` into `dir`.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Accepts the dataset directory or the path of its records.bin. Throws
/// FormatError on version mismatch, inconsistent sizes or truncation.
Dataset read_dataset(const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Rebuilds the complex one-bit snapshot from the real-valued stack.
OneBitSnapshot record_snapshot(const DatasetRecord& record);

/// Spectrum magnitudes and gaps produced by an external estimator for one
/// record; stored in `predictions.bin` as N + N float32 per record.
struct Prediction {
  std::vector<float> spectrum;
  std::vector<float> gaps_deg;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

void write_predictions(const std::vector<Prediction>& predictions, std::size_t grid_size,
                       const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path, std::size_t grid_size);

}  // namespace onebit_doa
