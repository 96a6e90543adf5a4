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

#include <cstddef>
#include <span>
#include <vector>

#include "onebit_doa/array_model.hpp"

namespace onebit_doa {

struct DoaEstimate {
  std::vector<double> angles_deg;       ///< ascending
  std::vector<double> peak_magnitudes;  ///< aligned with angles_deg
};

struct TrialScore {
  bool hit = false;
  /// Sum of squared errors in deg^2; zero for misses since RMSE only averages
  /// successful trials.
  double sq_err_sum = 0.0;
  /// Signed estimate - truth per target after ascending pairing.
  std::vector<double> errors_deg;
};

/// Indices of the k largest local maxima (strictly above both neighbours,
/// one-sided at the ends), ordered by decreasing magnitude with ties to the
/// lower index. Pads with the largest remaining bins when there are fewer
/// than k maxima.
std::vector<std::size_t> find_peaks(std::span<const double> magnitude, int k);

/// Angles grid[n] + beta[n] for the given peaks, sorted ascending.
DoaEstimate extract_doas(const SteeringDictionary& dict, const RVector& beta_rad,
                         std::span<const std::size_t> peak_indices, const RVector& magnitude = RVector());

/// Peak search on |x| followed by extract_doas.
DoaEstimate estimate_doas(const SteeringDictionary& dict, const CVector& x, const RVector& beta_rad, int k);

/// Pairs sorted estimates with sorted truth; hit iff every |error| <= threshold.
TrialScore score_trial(const DoaEstimate& estimate, std::span<const double> truth_deg, double threshold_deg);

struct MetricSummary {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double hit_rate = 0.0;
  /// sqrt(sum sq_err / (hits K)); NaN when there are no hits.
  double rmse_deg = 0.0;
};

/// Aggregates per-trial scores for K targets.
MetricSummary summarize_scores(std::span<const TrialScore> scores, std::size_t targets);

}  // namespace onebit_doa
