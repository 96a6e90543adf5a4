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

#include "onebit_doa/gaussian.hpp"

#include <cmath>

namespace onebit_doa {

namespace {

constexpr double kAsymptoticBelow = -30.0;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))

}  // namespace

double log_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z >= kAsymptoticBelow) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Phi(-t) = phi(t)/t * (1 - 1/t^2 + 3/t^4 - 15/t^6 + 105/t^8 - ...)
  const double t = -z;
  const double u = 1.0 / (t * t);
  const double series = 1.0 - u * (1.0 - u * (3.0 - u * (15.0 - u * 105.0)));
  return -0.5 * t * t - kLogSqrt2Pi - std::log(t) + std::log(series);
}

double inverse_mills_ratio(double z) {
  if (z >= kAsymptoticBelow) {
    return std::exp(-0.5 * z * z - kLogSqrt2Pi - log_normal_cdf(z));
  }
  // phi(-t)/Phi(-t) = t + 1/t - 2/t^3 + 10/t^5 - 74/t^7 + ...
  const double t = -z;
  const double u = 1.0 / (t * t);
  return t + (1.0 / t) * (1.0 - u * (2.0 - u * (10.0 - u * 74.0)));
}

Complex i_prime(Complex z) { return {-inverse_mills_ratio(z.real()), -inverse_mills_ratio(z.imag())}; }

}  // namespace onebit_doa
