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

/// Solves `system * x = rhs` for a Hermitian positive definite `system`
/// using a Cholesky factorization followed by one step of iterative
/// refinement. Throws NumericalError if the factorization fails or the
/// solution is not finite.
CVector solve_hpd(const CMatrix& system, const CVector& rhs);

/// Same for real symmetric positive definite systems.
RVector solve_spd(const RMatrix& system, const RVector& rhs);

/// Solves (D^H D + diag(d)) x = D^H v. Uses the Woodbury identity on the
/// smaller M x M system when D is wide; one refinement step either way.
CVector solve_regularized_ls(const CMatrix& D, const RVector& diag, const CVector& v);

/// Squared relative change ||next - prev||^2 / ||prev||^2. Falls back to the
/// absolute squared change when ||prev|| < 1e-12.
double relative_change(const CVector& next, const CVector& prev);
double relative_change(const RVector& next, const RVector& prev);

bool all_finite(const CVector& v);
bool all_finite(const RVector& v);

}  // namespace onebit_doa
