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

#include "onebit_doa/sbri.hpp"

namespace onebit_doa {

/// How the SBRI-X gap step forms its least-squares problem.
enum class BetaUpdateVariant {
  /// Coefficient increment dx = x^{k+1} - x^k and target g (the printed
  /// augmented update).
  delta_x,
  /// Coefficients x^{k+1} and target C(beta^k) x^k + g, mirroring the probit
  /// gap update.
  absolute_x,
};

struct SbriXConfig {
  SbriConfig base;
  double a = 1.0;
  double b = 0.5;
  BetaUpdateVariant beta_variant = BetaUpdateVariant::delta_x;

  void validate() const;
};

/// 1 / (1 + a exp(-b s)), overflow-safe.
double sigmoid_link(double s, double a, double b);

/// f(s) = log(1 + a exp(-b s)), the per-channel negative log likelihood.
double link_loss(double s, double a, double b);

/// f'(s) = -a b / (exp(b s) + a).
double link_loss_derivative(double s, double a, double b);

/// Curvature constant a b^2 / (a + 1)^2 of the quadratic majorizer. It equals
/// f''(0); it bounds f'' everywhere only when a = 1 (sup f'' = b^2 / 4).
double link_curvature(double a, double b);

/// Majorizer step g: per channel (a+1)^2 ybar / (b exp(b ybar u) + a b) with
/// u = Re/Im of (D x + eps). Exponents above 700 saturate the entry to 0.
CVector g_link(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, const CVector& eps, double a,
               double b);

/// Sum over both channels of log(1 + a exp(-b ybar (D x + eps))) plus the
/// smooth prior at `gamma`.
double bernoulli_nll(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, const CVector& eps, double a,
                     double b, double gamma, const SbriConfig& prior);

/// Quadratic surrogate anchored at (x_k, eps_k) with step g_k:
/// (L/2) ||D x - D x_k + eps - eps_k - g_k||^2 + smooth prior at `gamma`,
/// L = link_curvature(a, b). Dropped constants make it comparable only
/// between points sharing the same anchor.
double bernoulli_majorizer(const CMatrix& D, const CVector& x, const CVector& eps, const CVector& x_k,
                           const CVector& eps_k, const CVector& g_k, double a, double b, double gamma,
                           const SbriConfig& prior);

/// Solves (D^H D + gamma (a+1)^2/(a b^2) diag(weights)) x = D^H (D x_k + g).
CVector x_update_x(const CMatrix& D, const CVector& x_k, const CVector& g, double gamma, const RVector& weights,
                   double a, double b);

/// eps + g - D (x_new - x_old).
CVector eps_update(const CVector& eps, const CMatrix& D, const CVector& x_new, const CVector& x_old,
                   const CVector& g);

/// Augmented gap update with dx = x_new - x_old: solves
/// Re((B^H B) (.) (dx dx^H)^*) beta = Re(conj(dx) (.) B^H (g - A dx)) on the
/// support of x_new and clamps to [-r/2, r/2]. A vanishing dx keeps
/// `beta_prev` and flags the result degenerate.
GapUpdate beta_update_x(const CMatrix& A, const CMatrix& B, const RVector& beta_prev, const CVector& x_new,
                        const CVector& x_old, const CVector& g_dagger, double spacing_deg,
                        double active_fraction = 0.1);

/// Iterative MAP estimator with the logistic (Bernoulli) likelihood.
SolverResult sbrix_solve(const OneBitSnapshot& ybar, const SteeringDictionary& dict, const SbriXConfig& cfg,
                         SolveMode mode);

}  // namespace onebit_doa
