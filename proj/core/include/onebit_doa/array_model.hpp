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
#include <span>
#include <string_view>
#include <vector>

#include "onebit_doa/types.hpp"

namespace onebit_doa {

/// Linear array element offsets in half-wavelength units. The first element
/// is the phase reference and sits at 0; offsets are strictly increasing.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<double> positions);

  /// 18-element SLA, offsets {0..4, 7..19}.
  static ArrayGeometry sla18();
  /// 10-element SLA, offsets {0,3,4,5,6,7,11,16,18,19}.
  static ArrayGeometry sla10();
  /// Uniform linear array with `elements` half-wavelength spaced sensors.
  static ArrayGeometry ula(std::size_t elements);

  /// Accepts "sla18", "sla10" or "ulaN".
  static ArrayGeometry from_name(std::string_view name);

  /// Reads a JSON file of the form {"positions": [0, 1, 2, ...]}, or a bare
  /// JSON array of offsets.
  static ArrayGeometry load(const std::filesystem::path& path);

  std::span<const double> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }

 private:
  std::vector<double> positions_;
};

/// Uniform angular grid {lo, lo + r, ..., hi} in degrees.
struct AngleGrid {
  double lo_deg = -60.0;
  double hi_deg = 60.0;
  double spacing_deg = 1.0;

  /// Throws std::invalid_argument unless lo < hi, r > 0 and (hi - lo) / r is
  /// an integer.
  std::size_t size() const;
  double angle_deg(std::size_t index) const { return lo_deg + spacing_deg * static_cast<double>(index); }
  /// Index of the grid point nearest to `theta_deg`, clamped to the grid.
  std::size_t nearest_index(double theta_deg) const;
};

/// Steering dictionary A, its angular derivative B (per radian), and the grid
/// they were sampled on.
struct SteeringDictionary {
  AngleGrid grid;
  std::vector<double> angles_deg;
  CMatrix A;
  CMatrix B;

  std::size_t size() const noexcept { return angles_deg.size(); }
  std::size_t sensors() const noexcept { return static_cast<std::size_t>(A.rows()); }
  double spacing_deg() const noexcept { return grid.spacing_deg; }
  /// Largest admissible gap magnitude r/2, in radians.
  double max_gap_rad() const noexcept { return deg_to_rad(grid.spacing_deg / 2.0); }
};

/// Far-field sources impinging on the array.
struct Scene {
  std::vector<double> doas_deg;
  std::vector<Complex> amplitudes;

  std::size_t size() const noexcept { return doas_deg.size(); }
  /// Checks K >= 1, K < M, |doa| < 90, pairwise distinct DOAs and matching
  /// amplitude count.
  void validate(const ArrayGeometry& geometry) const;
};

struct Snapshot {
  CVector y;
  double sigma = 0.0;
};

/// csgn-quantized measurements; every component is exactly +1 or -1.
struct OneBitSnapshot {
  CVector ybar;

  std::size_t size() const noexcept { return static_cast<std::size_t>(ybar.size()); }
  /// Validates that all components are +-1.
  static OneBitSnapshot from_values(CVector values);
};

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg);

/// d a(theta) / d theta with theta in radians.
CVector steering_derivative(const ArrayGeometry& geometry, double theta_deg);

SteeringDictionary build_dictionary(const ArrayGeometry& geometry, const AngleGrid& grid);

/// C(beta) = A + B diag(beta), beta in radians.
CMatrix offgrid_manifold(const SteeringDictionary& dict, const RVector& beta_rad);

/// Noise standard deviation for SNR_dB = 10 log10(mean_k |s_k|^2 / sigma^2).
/// Returns 0 for +inf.
double noise_sigma(const Scene& scene, double snr_db);

/// Noiseless array response sum_k s_k a(theta_k).
CVector scene_response(const ArrayGeometry& geometry, const Scene& scene);

/// y = sum_k s_k a(theta_k) + n with Re n, Im n ~ N(0, sigma^2 / 2).
Snapshot simulate_snapshot(const ArrayGeometry& geometry, const Scene& scene, double snr_db,
                           std::mt19937_64& rng);
Snapshot simulate_snapshot(const ArrayGeometry& geometry, const Scene& scene, double snr_db,
                           std::uint64_t seed);

/// sign(Re y) + j sign(Im y) with sign(0) = +1.
OneBitSnapshot one_bit_quantize(const CVector& y);
inline OneBitSnapshot one_bit_quantize(const Snapshot& snapshot) { return one_bit_quantize(snapshot.y); }

}  // namespace onebit_doa
