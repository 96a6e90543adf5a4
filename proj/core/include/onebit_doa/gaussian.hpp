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

#include "onebit_doa/types.hpp"

namespace onebit_doa {

/// phi(z) / Phi(z) for the standard normal pdf/CDF. Stable for all finite z:
/// direct log-domain evaluation down to z = -30, Mills-ratio asymptotic series
/// below.
double inverse_mills_ratio(double z);

/// log Phi(z), accurate in both tails.
double log_normal_cdf(double z);

/// I'(z) = -phi(Re z)/Phi(Re z) - j phi(Im z)/Phi(Im z), the derivative of
/// log Phi applied to each component.
Complex i_prime(Complex z);

}  // namespace onebit_doa
