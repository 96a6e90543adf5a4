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

#include "onebit_doa/sbrix.hpp"

#include <cmath>
#include <string>

#include "onebit_doa/linalg.hpp"

namespace onebit_doa {

namespace {

constexpr double kExpClip = 700.0;

void check_dims(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, const CVector& eps) {
  if (static_cast<Eigen::Index>(ybar.size()) != D.rows() || x.size() != D.cols() || eps.size() != D.rows()) {
    throw std::invalid_argument("dimension mismatch between snapshot, dictionary, coefficients and noise");
  }
}

// log(1 + a e^t) without overflow.
double log1p_scaled_exp(double t, double a) {
  const double z = t + std::log(a);
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double g_component(double ybar, double u, double a, double b) {
  const double arg = b * ybar * u;
  if (arg > kExpClip) return 0.0;
  return (a + 1.0) * (a + 1.0) * ybar / (b * std::exp(arg) + a * b);
}

}  // namespace

void SbriXConfig::validate() const {
  base.validate();
  if (!(a > 0.0)) throw std::invalid_argument("link parameter a must be positive");
  if (!(b > 0.0)) throw std::invalid_argument("link parameter b must be positive");
}

double sigmoid_link(double s, double a, double b) {
  const double z = -b * s + std::log(a);
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double link_loss(double s, double a, double b) { return log1p_scaled_exp(-b * s, a); }

double link_loss_derivative(double s, double a, double b) {
  const double arg = b * s;
  if (arg > kExpClip) return 0.0;
  return -a * b / (std::exp(arg) + a);
}

double link_curvature(double a, double b) { return a * b * b / ((a + 1.0) * (a + 1.0)); }

CVector g_link(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, const CVector& eps, double a,
               double b) {
  check_dims(ybar, D, x, eps);
  const CVector u = D * x + eps;
  CVector g(u.size());
  for (Eigen::Index m = 0; m < u.size(); ++m) {
    g[m] = Complex(g_component(ybar.ybar[m].real(), u[m].real(), a, b),
                   g_component(ybar.ybar[m].imag(), u[m].imag(), a, b));
  }
  return g;
}

double bernoulli_nll(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, const CVector& eps, double a,
                     double b, double gamma, const SbriConfig& prior) {
  check_dims(ybar, D, x, eps);
  const CVector u = D * x + eps;
  double nll = 0.0;
  for (Eigen::Index m = 0; m < u.size(); ++m) {
    nll += link_loss(ybar.ybar[m].real() * u[m].real(), a, b);
    nll += link_loss(ybar.ybar[m].imag() * u[m].imag(), a, b);
  }
  return nll + prior_penalty(x, gamma, prior);
}

double bernoulli_majorizer(const CMatrix& D, const CVector& x, const CVector& eps, const CVector& x_k,
                           const CVector& eps_k, const CVector& g_k, double a, double b, double gamma,
                           const SbriConfig& prior) {
  const CVector r = D * (x - x_k) + eps - eps_k - g_k;
  return 0.5 * link_curvature(a, b) * r.squaredNorm() + prior_penalty(x, gamma, prior);
}

CVector x_update_x(const CMatrix& D, const CVector& x_k, const CVector& g, double gamma, const RVector& weights,
                   double a, double b) {
  if (g.size() != D.rows() || x_k.size() != D.cols()) throw std::invalid_argument("dimension mismatch in x update");
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("link parameters must be positive");
  const CVector target = D * x_k + g;
  return x_update(D, target, gamma / link_curvature(a, b), weights);
}

CVector eps_update(const CVector& eps, const CMatrix& D, const CVector& x_new, const CVector& x_old,
                   const CVector& g) {
  if (eps.size() != D.rows() || g.size() != D.rows() || x_new.size() != D.cols() || x_old.size() != D.cols()) {
    throw std::invalid_argument("dimension mismatch in noise update");
  }
  return eps + g - D * (x_new - x_old);
}

GapUpdate beta_update_x(const CMatrix& A, const CMatrix& B, const RVector& beta_prev, const CVector& x_new,
                        const CVector& x_old, const CVector& g_dagger, double spacing_deg, double active_fraction) {
  const CVector dx = x_new - x_old;
  if (dx.norm() <= 1e-12 * std::max(1.0, x_new.norm())) return GapUpdate{beta_prev, true};
  return solve_gap_system(A, B, dx, g_dagger, support_indices(x_new, active_fraction),
                          deg_to_rad(spacing_deg / 2.0));
}

SolverResult sbrix_solve(const OneBitSnapshot& ybar, const SteeringDictionary& dict, const SbriXConfig& cfg,
                         SolveMode mode) {
  cfg.validate();
  const SbriConfig& base = cfg.base;
  const CMatrix& A = dict.A;
  const bool off_grid = mode == SolveMode::off_grid;
  const double reg_scale = 1.0 / link_curvature(cfg.a, cfg.b);

  SolverResult res;
  res.x = matched_filter_init(ybar, A);
  res.eps = CVector::Zero(A.rows());
  res.beta_rad = RVector::Zero(A.cols());
  double gamma = base.gamma0;

  CMatrix D = A;
  if (base.record_objective) {
    res.objective_trace.push_back(bernoulli_nll(ybar, D, res.x, res.eps, cfg.a, cfg.b, base.gamma0, base));
  }

  for (int k = 1; k <= base.t_max; ++k) {
    try {
      if (off_grid) D = offgrid_manifold(dict, res.beta_rad);
      const CVector g = g_link(ybar, D, res.x, res.eps, cfg.a, cfg.b);
      const RVector weights = prior_weights(res.x, base);
      const CVector Dx = D * res.x;
      const CVector x_next = x_update(D, Dx + g, gamma * reg_scale, weights);
      const CVector eps_next = eps_update(res.eps, D, x_next, res.x, g);

      RVector beta_next = res.beta_rad;
      if (off_grid) {
        GapUpdate gap;
        if (cfg.beta_variant == BetaUpdateVariant::delta_x) {
          gap = beta_update_x(A, dict.B, res.beta_rad, x_next, res.x, g, dict.spacing_deg(), base.active_fraction);
        } else {
          gap = solve_gap_system(A, dict.B, x_next, Dx + g, support_indices(x_next, base.active_fraction),
                                 dict.max_gap_rad());
        }
        if (gap.degenerate) ++res.gap_warnings;
        beta_next = std::move(gap.beta_rad);
      }
      if (base.adapt_gamma) gamma = gamma_update(base.gamma0, x_next);

      const double dx = relative_change(x_next, res.x);
      const double deps = relative_change(eps_next, res.eps);
      res.x = x_next;
      res.eps = eps_next;
      res.beta_rad = std::move(beta_next);
      res.iterations = k;
      res.change_trace.push_back(dx);
      if (!all_finite(res.eps)) throw NumericalError("noise update produced non-finite values");
      if (base.record_objective) {
        if (off_grid) D = offgrid_manifold(dict, res.beta_rad);
        res.objective_trace.push_back(bernoulli_nll(ybar, D, res.x, res.eps, cfg.a, cfg.b, base.gamma0, base));
      }
      if (dx <= base.eps0 && deps <= base.eps0) {
        res.converged = true;
        break;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("SBRI-X iteration " + std::to_string(k) + ": " + e.what());
    }
  }
  return res;
}

}  // namespace onebit_doa
