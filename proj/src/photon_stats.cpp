// Copyright 2026 The fockchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fockchannel/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fockchannel/absorber_channel.hpp"
#include "fockchannel/mode_transforms.hpp"

namespace fockchannel {

namespace {

void check_unit(double c, double s) {
  if (std::abs(c * c + s * s - 1.0) > 1e-12) throw ValidationError("c^2 + s^2 must equal 1");
}

void check_output_leakage(const TwoModeState& state) {
  if (state.leakage() > kDefaultLeakageThreshold)
    throw CutoffError("cutoff too small: A-state leaks into the margin band");
}

SparseMatrix ladder(Mode mode, const FockCutoff& cutoff) {
  return SparseMatrix(embed(annihilation(cutoff.n_max()), mode).sparseView());
}

Complex moment(const TwoModeState& state, const SparseMatrix& op) {
  if (state.is_pure()) return state.vector().dot(op * state.vector());
  const Matrix& rho = state.matrix();
  Complex total = 0.0;
  for (Index col = 0; col < op.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(op, col); it; ++it) total += it.value() * rho(it.col(), it.row());
  return total;
}

double safe_mandel(double variance, double mean) {
  return mean > 0.0 ? (variance - mean) / mean : 0.0;
}

}  // namespace

TwoModeState build_A_state(Complex alpha, int n, double c, double s, const FockCutoff& cutoff) {
  check_unit(c, s);
  const TwoModeState input = build_input_state(alpha, n, cutoff);
  const SparseMatrix U = beamsplitter_sparse(std::atan2(s, c), cutoff);
  Vector out = U * input.vector();
  out.normalize();
  TwoModeState state = TwoModeState::pure(std::move(out), cutoff);
  check_output_leakage(state);
  return state;
}

TwoModeState build_A_state_by_creation(Complex alpha, int n, double c, double s, const FockCutoff& cutoff) {
  check_unit(c, s);
  if (n < 0) throw ValidationError("Fock photon number n must be >= 0");
  const int nm = cutoff.n_max();
  Vector psi = product_vector(coherent_state(c * alpha, nm), coherent_state(-s * alpha, nm));
  const SparseMatrix create = SparseMatrix(s * ladder(Mode::A, cutoff).adjoint() + c * ladder(Mode::B, cutoff).adjoint());
  for (int k = 0; k < n; ++k) psi = create * psi;
  psi.normalize();
  TwoModeState state = TwoModeState::pure(std::move(psi), cutoff);
  check_output_leakage(state);
  return state;
}

StatsReport compute_stats(const TwoModeState& state) {
  const FockCutoff& cut = state.cutoff();
  const int nm = cut.n_max();

  // Counting moments from the photon-number distribution p(j, k).
  double m_a = 0, m_b = 0, m_aa = 0, m_bb = 0, m_ab = 0;
  for (int j = 0; j < nm; ++j) {
    for (int k = 0; k < nm; ++k) {
      const Index i = cut.index(j, k);
      const double p = state.is_pure() ? std::norm(state.vector()(i)) : state.matrix()(i, i).real();
      m_a += p * j;
      m_b += p * k;
      m_aa += p * j * j;
      m_bb += p * k * k;
      m_ab += p * j * k;
    }
  }
  StatsReport r;
  r.mean_a = m_a;
  r.mean_b = m_b;
  const double var_a = m_aa - m_a * m_a;
  const double var_b = m_bb - m_b * m_b;
  r.covariance = m_ab - m_a * m_b;
  r.mandel_a = safe_mandel(var_a, m_a);
  r.mandel_b = safe_mandel(var_b, m_b);
  r.sum_variance = var_a + var_b + 2.0 * r.covariance;
  r.diff_variance = var_a + var_b - 2.0 * r.covariance;
  r.shot_level = m_a + m_b;

  // Field moments; [a, a^dag] = 1 is used for the anti-normally ordered terms.
  const SparseMatrix a = ladder(Mode::A, cut);
  const SparseMatrix b = ladder(Mode::B, cut);
  const Complex ea = moment(state, a);
  const Complex eb = moment(state, b);
  const Complex eaa = moment(state, a * a);
  const Complex ebb = moment(state, b * b);
  const Complex eab = moment(state, a * b);
  const Complex eadb = moment(state, SparseMatrix(a.adjoint()) * b);

  auto quadrature_variance = [](Complex first, Complex second, double number, double phi) {
    const Complex rot = std::polar(1.0, -phi);
    const double mean = std::sqrt(2.0) * (first * rot).real();
    return (second * rot * rot).real() + number + 0.5 - mean * mean;
  };
  r.min_quadrature_variance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kQuadraturePhases; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / kQuadraturePhases;
    r.min_quadrature_variance = std::min({r.min_quadrature_variance, quadrature_variance(ea, eaa, m_a, phi),
                                          quadrature_variance(eb, ebb, m_b, phi)});
  }

  // Q = (A + A^dag)/sqrt2 with A = a + b; P = (B - B^dag)/(i sqrt2) with B = a - b.
  const Complex sum_mean = ea + eb;
  const Complex diff_mean = ea - eb;
  const double sum_number = m_a + m_b + 2.0 * eadb.real();
  const double diff_number = m_a + m_b - 2.0 * eadb.real();
  const double var_q = (eaa + 2.0 * eab + ebb).real() + sum_number + 1.0 - 2.0 * sum_mean.real() * sum_mean.real();
  const double var_p = -(eaa - 2.0 * eab + ebb).real() + diff_number + 1.0 - 2.0 * diff_mean.imag() * diff_mean.imag();
  r.C = var_q + var_p;
  return r;
}

std::pair<double, double> mandel_closed_form(Complex alpha, int n, double c, double s) {
  check_unit(c, s);
  const double a2 = std::norm(alpha);
  const double c2 = c * c;
  const double s2 = s * s;
  const double den_a = c2 * a2 + s2 * n;
  const double den_b = s2 * a2 + c2 * n;
  const double q_a = den_a > 0.0 ? s2 * n * (2.0 * c2 * a2 - s2) / den_a : 0.0;
  const double q_b = den_b > 0.0 ? c2 * n * (2.0 * s2 * a2 - c2) / den_b : 0.0;
  return {q_a, q_b};
}

double covariance_closed_form(Complex alpha, int n, double c, double s) {
  check_unit(c, s);
  return -c * c * s * s * n * (2.0 * std::norm(alpha) + 1.0);
}

double epr_form_check(Complex alpha, const FockCutoff& cutoff) {
  const double h = std::numbers::sqrt2 / 2.0;
  const TwoModeState A = build_A_state(alpha, 1, h, h, cutoff);
  const int nm = cutoff.n_max();
  const Vector t0 = coherent_state(alpha * h, nm);
  const Vector t1 = annihilation(nm).adjoint() * t0;
  Vector rhs = product_vector(t0, t1) - product_vector(t1, t0);
  rhs = phase_shift_diagonal(Mode::B, std::numbers::pi, cutoff).cwiseProduct(rhs);
  rhs.normalize();
  return std::abs(A.vector().dot(rhs));
}

}  // namespace fockchannel
