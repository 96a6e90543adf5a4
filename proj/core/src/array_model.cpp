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

#include "onebit_doa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"

namespace onebit_doa {

namespace {

void check_angle(double theta_deg) {
  if (!std::isfinite(theta_deg) || std::abs(theta_deg) >= 90.0) {
    throw std::invalid_argument("steering angle must satisfy |theta| < 90 deg, got " +
                                std::to_string(theta_deg));
  }
}

}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<double> positions) : positions_(std::move(positions)) {
  if (positions_.size() < 2) {
    throw std::invalid_argument("array geometry needs at least two elements");
  }
  if (positions_.front() != 0.0) {
    throw std::invalid_argument("first element offset must be 0");
  }
  for (std::size_t m = 1; m < positions_.size(); ++m) {
    if (!std::isfinite(positions_[m]) || positions_[m] <= positions_[m - 1]) {
      throw std::invalid_argument("element offsets must be finite and strictly increasing");
    }
  }
}

ArrayGeometry ArrayGeometry::sla18() {
  return ArrayGeometry({0, 1, 2, 3, 4, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19});
}

ArrayGeometry ArrayGeometry::sla10() { return ArrayGeometry({0, 3, 4, 5, 6, 7, 11, 16, 18, 19}); }

ArrayGeometry ArrayGeometry::ula(std::size_t elements) {
  std::vector<double> p(elements);
  for (std::size_t m = 0; m < elements; ++m) p[m] = static_cast<double>(m);
  return ArrayGeometry(std::move(p));
}

ArrayGeometry ArrayGeometry::from_name(std::string_view name) {
  if (name == "sla18") return sla18();
  if (name == "sla10") return sla10();
  if (name.starts_with("ula") && name.size() > 3) {
    const std::string count(name.substr(3));
    std::size_t used = 0;
    const unsigned long n = std::stoul(count, &used);
    if (used == count.size()) return ula(n);
  }
  throw std::invalid_argument("unknown array geometry '" + std::string(name) + "'");
}

ArrayGeometry ArrayGeometry::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open geometry file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("geometry file " + path.string() + ": " + e.what());
  }
  const nlohmann::json& arr = doc.is_object() ? doc.at("positions") : doc;
  if (!arr.is_array()) throw FormatError("geometry file " + path.string() + ": expected an array");
  return ArrayGeometry(arr.get<std::vector<double>>());
}

std::size_t AngleGrid::size() const {
  if (!(lo_deg < hi_deg)) throw std::invalid_argument("angle grid needs lo < hi");
  if (!(spacing_deg > 0.0)) throw std::invalid_argument("angle grid spacing must be positive");
  const double steps = (hi_deg - lo_deg) / spacing_deg;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw std::invalid_argument("angle grid span is not an integral multiple of the spacing");
  }
  return static_cast<std::size_t>(rounded) + 1;
}

std::size_t AngleGrid::nearest_index(double theta_deg) const {
  const double pos = std::round((theta_deg - lo_deg) / spacing_deg);
  const double last = static_cast<double>(size() - 1);
  return static_cast<std::size_t>(std::clamp(pos, 0.0, last));
}

void Scene::validate(const ArrayGeometry& geometry) const {
  if (doas_deg.empty()) throw std::invalid_argument("scene has no sources");
  if (doas_deg.size() >= geometry.size()) {
    throw std::invalid_argument("scene must have fewer sources than sensors");
  }
  if (amplitudes.size() != doas_deg.size()) {
    throw std::invalid_argument("scene amplitude count does not match DOA count");
  }
  for (std::size_t k = 0; k < doas_deg.size(); ++k) {
    check_angle(doas_deg[k]);
    for (std::size_t l = 0; l < k; ++l) {
      if (doas_deg[k] == doas_deg[l]) throw std::invalid_argument("scene DOAs must be distinct");
    }
  }
}

OneBitSnapshot OneBitSnapshot::from_values(CVector values) {
  for (Eigen::Index m = 0; m < values.size(); ++m) {
    const double re = values[m].real();
    const double im = values[m].imag();
    if ((re != 1.0 && re != -1.0) || (im != 1.0 && im != -1.0)) {
      throw std::invalid_argument("one-bit snapshot entries must be +-1 +- j");
    }
  }
  return OneBitSnapshot{std::move(values)};
}

CVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
  check_angle(theta_deg);
  const double s = std::sin(deg_to_rad(theta_deg));
  const auto pos = geometry.positions();
  CVector a(static_cast<Eigen::Index>(pos.size()));
  for (std::size_t m = 0; m < pos.size(); ++m) {
    a[static_cast<Eigen::Index>(m)] = std::polar(1.0, kPi * pos[m] * s);
  }
  return a;
}

CVector steering_derivative(const ArrayGeometry& geometry, double theta_deg) {
  check_angle(theta_deg);
  const double th = deg_to_rad(theta_deg);
  const double s = std::sin(th);
  const double c = std::cos(th);
  const auto pos = geometry.positions();
  CVector b(static_cast<Eigen::Index>(pos.size()));
  for (std::size_t m = 0; m < pos.size(); ++m) {
    const double k = kPi * pos[m];
    b[static_cast<Eigen::Index>(m)] = Complex(0.0, k * c) * std::polar(1.0, k * s);
  }
  return b;
}

SteeringDictionary build_dictionary(const ArrayGeometry& geometry, const AngleGrid& grid) {
  const std::size_t n = grid.size();
  SteeringDictionary dict;
  dict.grid = grid;
  dict.angles_deg.resize(n);
  dict.A.resize(static_cast<Eigen::Index>(geometry.size()), static_cast<Eigen::Index>(n));
  dict.B.resizeLike(dict.A);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = grid.angle_deg(i);
    dict.angles_deg[i] = theta;
    dict.A.col(static_cast<Eigen::Index>(i)) = steering_vector(geometry, theta);
    dict.B.col(static_cast<Eigen::Index>(i)) = steering_derivative(geometry, theta);
  }
  return dict;
}

CMatrix offgrid_manifold(const SteeringDictionary& dict, const RVector& beta_rad) {
  if (beta_rad.size() != dict.A.cols()) {
    throw std::invalid_argument("gap vector length does not match dictionary size");
  }
  return dict.A + dict.B * beta_rad.cast<Complex>().asDiagonal();
}

double noise_sigma(const Scene& scene, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite or +inf");
  double power = 0.0;
  for (const Complex& s : scene.amplitudes) power += std::norm(s);
  power /= static_cast<double>(scene.amplitudes.size());
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

CVector scene_response(const ArrayGeometry& geometry, const Scene& scene) {
  CVector y = CVector::Zero(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t k = 0; k < scene.size(); ++k) {
    y += scene.amplitudes[k] * steering_vector(geometry, scene.doas_deg[k]);
  }
  return y;
}

Snapshot simulate_snapshot(const ArrayGeometry& geometry, const Scene& scene, double snr_db,
                           std::mt19937_64& rng) {
  scene.validate(geometry);
  Snapshot snap;
  snap.sigma = noise_sigma(scene, snr_db);
  snap.y = scene_response(geometry, scene);
  if (snap.sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, snap.sigma / std::sqrt(2.0));
    for (Eigen::Index m = 0; m < snap.y.size(); ++m) {
      const double re = noise(rng);
      const double im = noise(rng);
      snap.y[m] += Complex(re, im);
    }
  }
  return snap;
}

Snapshot simulate_snapshot(const ArrayGeometry& geometry, const Scene& scene, double snr_db,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return simulate_snapshot(geometry, scene, snr_db, rng);
}

OneBitSnapshot one_bit_quantize(const CVector& y) {
  CVector q(y.size());
  for (Eigen::Index m = 0; m < y.size(); ++m) {
    q[m] = Complex(y[m].real() >= 0.0 ? 1.0 : -1.0, y[m].imag() >= 0.0 ? 1.0 : -1.0);
  }
  return OneBitSnapshot{std::move(q)};
}

std::string to_string(SolveMode mode) { return mode == SolveMode::on_grid ? "on_grid" : "off_grid"; }

SolveMode parse_solve_mode(const std::string& text) {
  if (text == "on_grid" || text == "on") return SolveMode::on_grid;
  if (text == "off_grid" || text == "off") return SolveMode::off_grid;
  throw std::invalid_argument("unknown solve mode '" + text + "' (expected on_grid or off_grid)");
}

}  // namespace onebit_doa
