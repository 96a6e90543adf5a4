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

#include <vector>

#include "onebit_doa/array_model.hpp"
#include "onebit_doa/types.hpp"

namespace onebit_doa {

/// Sparsity prior used by the reweighting step.
enum class PriorMode {
  laplacian,  ///< (gamma/alpha) sum (|x|^2 + eta)^(alpha/2)
  slim,       ///< (gamma/2) sum log(|x|^2 + slim_epsilon), the 1bSLIM prior
};

struct SbriConfig {
  double alpha = 1.0;
  double eta = 1e-6;
  double gamma0 = 1.0;
  int t_max = 50;
  double eps0 = 1e-6;
  PriorMode prior_mode = PriorMode::laplacian;
  double slim_epsilon = 1e-6;
  /// gamma^k = gamma0 * ||x^k||. When false gamma stays at gamma0, which makes
  /// every iteration a majorize-minimize step on a fixed objective.
  bool adapt_gamma = true;
  /// Indices with |x_n| >= active_fraction * max|x| take part in the gap update.
  double active_fraction = 0.1;
  bool record_objective = true;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Output of every iterative solver. `x` is the spectrum with the noise scale
/// absorbed; only |x| and the gaps matter for DOA readout.
struct SolverResult {
  CVector x;
  RVector beta_rad;
  /// Latent normalized noise; populated by the SBRI-X solvers only.
  CVector eps;
  int iterations = 0;
  bool converged = false;
  /// Objective with gamma frozen at gamma0: one entry for the initial point,
  /// then one per iteration.
  std::vector<double> objective_trace;
  /// Squared relative change of x per iteration.
  std::vector<double> change_trace;
  /// Gap updates that hit a singular or degenerate reduced system.
  int gap_warnings = 0;
};

struct GapUpdate {
  RVector beta_rad;
  bool degenerate = false;
};

/// Normalized matched filter A^H ybar / ||A^H ybar||.
CVector matched_filter_init(const OneBitSnapshot& ybar, const CMatrix& A);

/// MM target for the probit likelihood: with d = ybar (.) Dx per component,
/// returns ybar (.) (d - I'(d)). Serves as v (D = A) and w (D = C(beta)).
CVector mm_target(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x);

/// Diagonal of the IRLS weight matrix.
RVector prior_weights(const CVector& x, const SbriConfig& cfg);

/// Smooth prior penalty at the given gamma.
double prior_penalty(const CVector& x, double gamma, const SbriConfig& cfg);

/// Solves (D^H D + gamma diag(weights)) x = D^H v.
CVector x_update(const CMatrix& D, const CVector& v, double gamma, const RVector& weights);


/// Indices n with |c_n| >= fraction * max|c|; empty when c == 0.
std::vector<Eigen::Index> support_indices(const CVector& c, double fraction);

/// Least-squares gaps: minimizes ||B diag(c) beta - (target - A c)||^2 over
/// real beta restricted to `active`, with a Tikhonov guard
/// delta = 1e-8 trace(P) / |active|, then clamps to [-half_width, half_width].
/// Entries outside `active` are zero. Flags `degenerate` and returns zeros if
/// the reduced system is singular.
GapUpdate solve_gap_system(const CMatrix& A, const CMatrix& B, const CVector& c, const CVector& target,
                           const std::vector<Eigen::Index>& active, double half_width_rad);

/// Gap update for the probit model: solve_gap_system with c = x and
/// target = w on the support of x. `spacing_deg` is the grid spacing r.
GapUpdate beta_update(const CMatrix& A, const CMatrix& B, const CVector& x, const CVector& w, double spacing_deg,
                      double active_fraction = 0.1);

/// gamma0 * ||x||, floored at 1e-12.
double gamma_update(double gamma0, const CVector& x);

/// Exact negative log posterior: sum of -log Phi over both channels plus the
/// smooth prior at `gamma`.
double sbri_objective(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, double gamma,
                      const SbriConfig& cfg);

/// Iterative MAP estimator with the probit likelihood (on-grid or off-grid).
SolverResult sbri_solve(const OneBitSnapshot& ybar, const SteeringDictionary& dict, const SbriConfig& cfg,
                        SolveMode mode);

}  // namespace onebit_doa
