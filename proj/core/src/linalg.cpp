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

#include "onebit_doa/linalg.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace onebit_doa {

namespace {

constexpr double kTinyNorm = 1e-12;

template <typename Matrix, typename Vector>
Vector cholesky_solve(const Matrix& system, const Vector& rhs) {
  if (system.rows() != system.cols() || system.rows() != rhs.size()) {
    throw std::invalid_argument("linear system dimensions do not agree");
  }
  Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization failed: system is not positive definite");
  }
  Vector x = llt.solve(rhs);
  const Vector residual = rhs - system * x;
  x += llt.solve(residual);
  if (!x.allFinite()) throw NumericalError("linear solve produced non-finite values");
  return x;
}

template <typename Vector>
double squared_relative_change(const Vector& next, const Vector& prev) {
  if (next.size() != prev.size()) throw std::invalid_argument("vector sizes differ");
  const double diff = (next - prev).squaredNorm();
  const double base = prev.squaredNorm();
  if (std::sqrt(base) < kTinyNorm) return diff;
  return diff / base;
}

}  // namespace

CVector solve_hpd(const CMatrix& system, const CVector& rhs) { return cholesky_solve(system, rhs); }

RVector solve_spd(const RMatrix& system, const RVector& rhs) { return cholesky_solve(system, rhs); }

double relative_change(const CVector& next, const CVector& prev) { return squared_relative_change(next, prev); }

double relative_change(const RVector& next, const RVector& prev) { return squared_relative_change(next, prev); }

CVector solve_regularized_ls(const CMatrix& D, const RVector& diag, const CVector& v) {
  if (diag.size() != D.cols() || v.size() != D.rows()) {
    throw std::invalid_argument("regularized least-squares dimensions do not agree");
  }
  if (!(diag.array() > 0.0).all()) throw std::invalid_argument("regularizer diagonal must be positive");
  if (D.rows() >= D.cols()) {
    CMatrix system = D.adjoint() * D;
    system.diagonal().real() += diag;
    return solve_hpd(system, D.adjoint() * v);
  }

  // (D^H D + L)^-1 = L^-1 - L^-1 D^H (I + D L^-1 D^H)^-1 D L^-1
  const RVector inv = diag.cwiseInverse();
  const CMatrix DL = D * inv.asDiagonal();
  CMatrix inner = DL * D.adjoint();
  inner.diagonal().real().array() += 1.0;
  Eigen::LLT<CMatrix> llt(inner);
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed: system is not positive definite");
  auto apply_inverse = [&](const CVector& rhs) -> CVector {
    const CVector z = inv.asDiagonal() * rhs;
    return z - DL.adjoint() * llt.solve(D * z);
  };

  CVector x = DL.adjoint() * llt.solve(v);
  const CVector residual = D.adjoint() * (v - D * x) - diag.asDiagonal() * x;
  x += apply_inverse(residual);
  if (!x.allFinite()) throw NumericalError("linear solve produced non-finite values");
  return x;
}

bool all_finite(const CVector& v) { return v.allFinite(); }

bool all_finite(const RVector& v) { return v.allFinite(); }

}  // namespace onebit_doa
