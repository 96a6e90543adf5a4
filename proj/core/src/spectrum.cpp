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

#include "onebit_doa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace onebit_doa {

std::vector<std::size_t> find_peaks(std::span<const double> magnitude, int k) {
  if (k <= 0) throw std::invalid_argument("number of peaks must be positive");
  const std::size_t n = magnitude.size();
  if (static_cast<std::size_t>(k) > n) throw std::invalid_argument("more peaks requested than bins");

  auto by_magnitude = [&](std::size_t a, std::size_t b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] > magnitude[b];
    return a < b;
  };

  std::vector<std::size_t> maxima;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    const bool above_left = i == 0 || magnitude[i] > magnitude[i - 1];
    const bool above_right = i + 1 == n || magnitude[i] > magnitude[i + 1];
    // A single bin has no neighbours and is not a peak by itself.
    ((above_left && above_right && n > 1) ? maxima : rest).push_back(i);
  }
  std::sort(maxima.begin(), maxima.end(), by_magnitude);
  const auto want = static_cast<std::size_t>(k);
  if (maxima.size() >= want) {
    maxima.resize(want);
    return maxima;
  }
  std::sort(rest.begin(), rest.end(), by_magnitude);
  rest.resize(want - maxima.size());
  maxima.insert(maxima.end(), rest.begin(), rest.end());
  return maxima;
}

DoaEstimate extract_doas(const SteeringDictionary& dict, const RVector& beta_rad,
                         std::span<const std::size_t> peak_indices, const RVector& magnitude) {
  struct Entry {
    double angle;
    double mag;
  };
  std::vector<Entry> entries;
  entries.reserve(peak_indices.size());
  for (std::size_t n : peak_indices) {
    if (n >= dict.size()) throw std::out_of_range("peak index outside the dictionary");
    const double gap = beta_rad.size() > 0 ? rad_to_deg(beta_rad[static_cast<Eigen::Index>(n)]) : 0.0;
    const double mag = magnitude.size() > 0 ? magnitude[static_cast<Eigen::Index>(n)] : 0.0;
    entries.push_back({dict.angles_deg[n] + gap, mag});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.angle < b.angle; });
  DoaEstimate est;
  for (const Entry& e : entries) {
    est.angles_deg.push_back(e.angle);
    est.peak_magnitudes.push_back(e.mag);
  }
  return est;
}

DoaEstimate estimate_doas(const SteeringDictionary& dict, const CVector& x, const RVector& beta_rad, int k) {
  const RVector mag = x.cwiseAbs();
  const auto peaks = find_peaks(std::span<const double>(mag.data(), static_cast<std::size_t>(mag.size())), k);
  return extract_doas(dict, beta_rad, peaks, mag);
}

TrialScore score_trial(const DoaEstimate& estimate, std::span<const double> truth_deg, double threshold_deg) {
  if (estimate.angles_deg.size() != truth_deg.size()) {
    throw std::invalid_argument("estimate and truth have different numbers of targets");
  }
  std::vector<double> est(estimate.angles_deg);
  std::vector<double> truth(truth_deg.begin(), truth_deg.end());
  std::sort(est.begin(), est.end());
  std::sort(truth.begin(), truth.end());

  TrialScore score;
  score.hit = true;
  double sq = 0.0;
  for (std::size_t k = 0; k < est.size(); ++k) {
    const double err = est[k] - truth[k];
    score.errors_deg.push_back(err);
    sq += err * err;
    if (!(std::abs(err) <= threshold_deg)) score.hit = false;
  }
  score.sq_err_sum = score.hit ? sq : 0.0;
  return score;
}

MetricSummary summarize_scores(std::span<const TrialScore> scores, std::size_t targets) {
  MetricSummary s;
  s.trials = scores.size();
  double sq = 0.0;
  for (const TrialScore& t : scores) {
    if (t.hit) {
      ++s.hits;
      sq += t.sq_err_sum;
    }
  }
  s.hit_rate = s.trials > 0 ? static_cast<double>(s.hits) / static_cast<double>(s.trials) : 0.0;
  s.rmse_deg = s.hits > 0 && targets > 0 ? std::sqrt(sq / static_cast<double>(s.hits * targets))
                                         : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace onebit_doa
