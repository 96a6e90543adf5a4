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

#include "onebit_doa/sbri.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onebit_doa/gaussian.hpp"
#include "onebit_doa/linalg.hpp"

namespace onebit_doa {

namespace {

constexpr double kGammaFloor = 1e-12;
constexpr double kGapTikhonov = 1e-8;

void check_dims(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x) {
  if (static_cast<Eigen::Index>(ybar.size()) != D.rows() || x.size() != D.cols()) {
    throw std::invalid_argument("dimension mismatch between snapshot, dictionary and coefficients");
  }
}

}  // namespace

void SbriConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(slim_epsilon > 0.0)) throw std::invalid_argument("slim_epsilon must be positive");
  if (!(active_fraction >= 0.0 && active_fraction <= 1.0)) {
    throw std::invalid_argument("active_fraction must lie in [0, 1]");
  }
}

CVector matched_filter_init(const OneBitSnapshot& ybar, const CMatrix& A) {
  if (static_cast<Eigen::Index>(ybar.size()) != A.rows()) {
    throw std::invalid_argument("snapshot length does not match dictionary rows");
  }
  CVector x = A.adjoint() * ybar.ybar;
  const double norm = x.norm();
  if (!(norm > 0.0)) throw NumericalError("matched filter output is zero");
  return x / norm;
}

CVector mm_target(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x) {
  check_dims(ybar, D, x);
  const CVector Dx = D * x;
  CVector v(Dx.size());
  for (Eigen::Index m = 0; m < Dx.size(); ++m) {
    const double yr = ybar.ybar[m].real();
    const double yi = ybar.ybar[m].imag();
    const Complex d(yr * Dx[m].real(), yi * Dx[m].imag());
    const Complex vt = d - i_prime(d);
    v[m] = Complex(yr * vt.real(), yi * vt.imag());
  }
  return v;
}

RVector prior_weights(const CVector& x, const SbriConfig& cfg) {
  RVector w(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double mag2 = std::norm(x[n]);
    w[n] = cfg.prior_mode == PriorMode::slim ? 1.0 / (mag2 + cfg.slim_epsilon)
                                             : std::pow(mag2 + cfg.eta, 0.5 * cfg.alpha - 1.0);
  }
  return w;
}

double prior_penalty(const CVector& x, double gamma, const SbriConfig& cfg) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double mag2 = std::norm(x[n]);
    sum += cfg.prior_mode == PriorMode::slim ? std::log(mag2 + cfg.slim_epsilon)
                                             : std::pow(mag2 + cfg.eta, 0.5 * cfg.alpha);
  }
  return cfg.prior_mode == PriorMode::slim ? 0.5 * gamma * sum : gamma / cfg.alpha * sum;
}

CVector x_update(const CMatrix& D, const CVector& v, double gamma, const RVector& weights) {
  if (v.size() != D.rows()) throw std::invalid_argument("target length does not match dictionary rows");
  if (weights.size() != D.cols()) throw std::invalid_argument("weight vector length mismatch");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if ((weights.array() <= 0.0).any()) throw std::invalid_argument("weights must be positive");
  return solve_regularized_ls(D, gamma * weights, v);
}

std::vector<Eigen::Index> support_indices(const CVector& c, double fraction) {
  std::vector<Eigen::Index> active;
  const double peak = c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;
  if (!(peak > 0.0)) return active;
  const double threshold = fraction * peak;
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    if (std::abs(c[n]) >= threshold) active.push_back(n);
  }
  return active;
}

GapUpdate solve_gap_system(const CMatrix& A, const CMatrix& B, const CVector& c, const CVector& target,
                           const std::vector<Eigen::Index>& active, double half_width_rad) {
  if (A.rows() != B.rows() || A.cols() != B.cols() || c.size() != A.cols() || target.size() != A.rows()) {
    throw std::invalid_argument("dimension mismatch in gap update");
  }
  GapUpdate out{RVector::Zero(c.size()), false};
  if (active.empty()) return out;

  const auto na = static_cast<Eigen::Index>(active.size());
  CMatrix Ba(B.rows(), na);
  CVector ca(na);
  for (Eigen::Index i = 0; i < na; ++i) {
    Ba.col(i) = B.col(active[static_cast<std::size_t>(i)]);
    ca[i] = c[active[static_cast<std::size_t>(i)]];
  }
  const CVector residual = target - A * c;
  // P = Re((B^H B) (.) (c c^H)^*), rhs = Re(conj(c) (.) B^H residual)
  const CMatrix gram = Ba.adjoint() * Ba;
  const CMatrix outer_conj = (ca * ca.adjoint()).conjugate();
  RMatrix P = gram.cwiseProduct(outer_conj).real();
  const RVector rhs = (ca.conjugate().cwiseProduct(Ba.adjoint() * residual)).real();

  const double trace = P.trace();
  if (!(trace > 0.0) || !std::isfinite(trace)) {
    out.degenerate = true;
    return out;
  }
  P.diagonal().array() += kGapTikhonov * trace / static_cast<double>(na);
  RVector beta_active;
  try {
    beta_active = solve_spd(P, rhs);
  } catch (const NumericalError&) {
    out.degenerate = true;
    return out;
  }
  for (Eigen::Index i = 0; i < na; ++i) {
    out.beta_rad[active[static_cast<std::size_t>(i)]] = std::clamp(beta_active[i], -half_width_rad, half_width_rad);
  }
  return out;
}

GapUpdate beta_update(const CMatrix& A, const CMatrix& B, const CVector& x, const CVector& w, double spacing_deg,
                      double active_fraction) {
  return solve_gap_system(A, B, x, w, support_indices(x, active_fraction), deg_to_rad(spacing_deg / 2.0));
}

double gamma_update(double gamma0, const CVector& x) {
  if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  return std::max(gamma0 * x.norm(), kGammaFloor);
}

double sbri_objective(const OneBitSnapshot& ybar, const CMatrix& D, const CVector& x, double gamma,
                      const SbriConfig& cfg) {
  check_dims(ybar, D, x);
  const CVector Dx = D * x;
  double nll = 0.0;
  for (Eigen::Index m = 0; m < Dx.size(); ++m) {
    nll -= log_normal_cdf(ybar.ybar[m].real() * Dx[m].real());
    nll -= log_normal_cdf(ybar.ybar[m].imag() * Dx[m].imag());
  }
  return nll + prior_penalty(x, gamma, cfg);
}

SolverResult sbri_solve(const OneBitSnapshot& ybar, const SteeringDictionary& dict, const SbriConfig& cfg,
                        SolveMode mode) {
  cfg.validate();
  const CMatrix& A = dict.A;
  const bool off_grid = mode == SolveMode::off_grid;
  const double half_width = dict.max_gap_rad();

  SolverResult res;
  res.x = matched_filter_init(ybar, A);
  res.beta_rad = RVector::Zero(A.cols());
  double gamma = cfg.gamma0;

  CMatrix D = A;
  if (cfg.record_objective) res.objective_trace.push_back(sbri_objective(ybar, D, res.x, cfg.gamma0, cfg));

  for (int k = 1; k <= cfg.t_max; ++k) {
    try {
      if (off_grid) D = offgrid_manifold(dict, res.beta_rad);
      const CVector target = mm_target(ybar, D, res.x);
      const RVector weights = prior_weights(res.x, cfg);
      const CVector x_next = x_update(D, target, gamma, weights);

      RVector beta_next = res.beta_rad;
      if (off_grid) {
        GapUpdate gap = solve_gap_system(A, dict.B, x_next, target, support_indices(x_next, cfg.active_fraction),
                                         half_width);
        if (gap.degenerate) ++res.gap_warnings;
        beta_next = std::move(gap.beta_rad);
      }
      if (cfg.adapt_gamma) gamma = gamma_update(cfg.gamma0, x_next);

      const double dx = relative_change(x_next, res.x);
      const double dbeta = off_grid ? relative_change(beta_next, res.beta_rad) : 0.0;
      res.x = x_next;
      res.beta_rad = std::move(beta_next);
      res.iterations = k;
      res.change_trace.push_back(dx);
      if (cfg.record_objective) {
        if (off_grid) D = offgrid_manifold(dict, res.beta_rad);
        res.objective_trace.push_back(sbri_objective(ybar, D, res.x, cfg.gamma0, cfg));
      }
      if (dx <= cfg.eps0 && dbeta <= cfg.eps0) {
        res.converged = true;
        break;
      }
    } catch (const NumericalError& e) {
      throw NumericalError("SBRI iteration " + std::to_string(k) + ": " + e.what());
    }
  }
  return res;
}

}  // namespace onebit_doa
