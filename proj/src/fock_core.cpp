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

#include "fockchannel/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fockchannel {

namespace {

constexpr double kNormTol = 1e-10;

}  // namespace

FockCutoff::FockCutoff(int n_max, int margin) : n_max_(n_max), margin_(margin) {
  if (n_max < 2) throw ValidationError("cutoff: n_max must be >= 2, got " + std::to_string(n_max));
  if (margin < 0 || margin >= n_max)
    throw ValidationError("cutoff: margin must satisfy 0 <= margin < n_max");
}

FockCutoff FockCutoff::for_input(Complex alpha, int n, int margin, int cap) {
  const double amp = std::abs(alpha);
  const int rule = n + static_cast<int>(std::ceil(amp * amp + 8.0 * amp)) + 10;
  return FockCutoff(std::min(rule, cap), margin);
}

std::string_view to_string(OperatorLabel label) {
  switch (label) {
    case OperatorLabel::a: return "a";
    case OperatorLabel::a_dag: return "a_dag";
    case OperatorLabel::b: return "b";
    case OperatorLabel::b_dag: return "b_dag";
    case OperatorLabel::n_a: return "n_a";
    case OperatorLabel::n_b: return "n_b";
    case OperatorLabel::x_a: return "x_a";
    case OperatorLabel::p_a: return "p_a";
    case OperatorLabel::x_b: return "x_b";
    case OperatorLabel::p_b: return "p_b";
    case OperatorLabel::custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------------------
// TwoModeState

TwoModeState TwoModeState::pure(Vector psi, const FockCutoff& cutoff) {
  if (psi.size() != cutoff.dim())
    throw DimensionError("state vector length does not match n_max^2");
  if (std::abs(psi.norm() - 1.0) > kNormTol)
    throw ValidationError("pure state is not normalized");
  return TwoModeState(std::move(psi), cutoff);
}

TwoModeState TwoModeState::mixed(Matrix rho, const FockCutoff& cutoff) {
  if (rho.rows() != cutoff.dim() || rho.cols() != cutoff.dim())
    throw DimensionError("density matrix size does not match n_max^2");
  validate_density(rho, true);
  return TwoModeState(std::move(rho), cutoff);
}

TwoModeState TwoModeState::mixed_trusted(Matrix rho, const FockCutoff& cutoff) {
  if (rho.rows() != cutoff.dim() || rho.cols() != cutoff.dim())
    throw DimensionError("density matrix size does not match n_max^2");
  validate_density(rho, false);
  return TwoModeState(std::move(rho), cutoff);
}

const Vector& TwoModeState::vector() const {
  if (!is_pure()) throw Error("state is mixed; no state vector available");
  return std::get<Vector>(data_);
}

const Matrix& TwoModeState::matrix() const {
  if (is_pure()) throw Error("state is pure; use density()");
  return std::get<Matrix>(data_);
}

Matrix TwoModeState::density() const {
  if (is_pure()) {
    const auto& psi = std::get<Vector>(data_);
    return psi * psi.adjoint();
  }
  return std::get<Matrix>(data_);
}

double TwoModeState::leakage() const {
  const int n = cutoff_.n_max();
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (!cutoff_.in_leakage_band(j) && !cutoff_.in_leakage_band(k)) continue;
      const Index i = cutoff_.index(j, k);
      total += is_pure() ? std::norm(std::get<Vector>(data_)(i))
                         : std::get<Matrix>(data_)(i, i).real();
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Single-mode states and helpers

Vector coherent_state(Complex alpha, int n_max) {
  Vector psi(n_max);
  psi(0) = std::exp(-0.5 * std::norm(alpha));
  for (int j = 1; j < n_max; ++j) psi(j) = psi(j - 1) * alpha / std::sqrt(static_cast<double>(j));
  return psi / psi.norm();
}

Vector fock_state(int n, int n_max) {
  if (n < 0 || n >= n_max) throw CutoffError("Fock level outside the cutoff");
  Vector psi = Vector::Zero(n_max);
  psi(n) = 1.0;
  return psi;
}

double poisson_tail(double mean, int k) {
  if (k <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  // Sum the tail directly in log space; the terms decay once j > mean.
  double total = 0.0;
  for (int j = k; j < k + 1000; ++j) {
    const double term = std::exp(-mean + j * std::log(mean) - std::lgamma(j + 1.0));
    total += term;
    if (j > mean && term < total * 1e-17) break;
  }
  return total;
}

Vector product_vector(const Vector& psi_a, const Vector& psi_b) {
  Vector out(psi_a.size() * psi_b.size());
  for (Index j = 0; j < psi_a.size(); ++j)
    out.segment(j * psi_b.size(), psi_b.size()) = psi_a(j) * psi_b;
  return out;
}

Matrix as_grid(const Vector& psi, int n_max) {
  Matrix grid(n_max, n_max);
  for (int j = 0; j < n_max; ++j)
    for (int k = 0; k < n_max; ++k) grid(j, k) = psi(static_cast<Index>(j) * n_max + k);
  return grid;
}

Vector from_grid(const Matrix& grid) {
  const Index n = grid.rows();
  Vector psi(n * grid.cols());
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < grid.cols(); ++k) psi(j * grid.cols() + k) = grid(j, k);
  return psi;
}

std::vector<Index> safe_indices(const FockCutoff& cutoff) {
  std::vector<Index> out;
  const int n = cutoff.n_max();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j + k <= n - 2) out.push_back(cutoff.index(j, k));
  return out;
}

// ---------------------------------------------------------------------------
// Operations

TwoModeState build_input_state(Complex alpha, int n, const FockCutoff& cutoff) {
  const int usable = cutoff.n_max() - cutoff.margin();
  if (n < 0) throw ValidationError("Fock photon number n must be >= 0");
  if (n >= usable)
    throw CutoffError("cutoff too small: n = " + std::to_string(n) +
                      " reaches the leakage band (n_max - margin = " + std::to_string(usable) + ")");
  const double tail = poisson_tail(std::norm(alpha), usable);
  if (tail > kTailBound) {
    std::ostringstream msg;
    msg << "cutoff too small: Poisson tail of |alpha|^2 beyond level " << usable << " is " << tail
        << " (bound " << kTailBound << ")";
    throw CutoffError(msg.str());
  }
  return TwoModeState::pure(product_vector(coherent_state(alpha, cutoff.n_max()),
                                           fock_state(n, cutoff.n_max())),
                            cutoff);
}

ModeOperator mode_operator(OperatorLabel label, const FockCutoff& cutoff) {
  const Matrix a1 = annihilation(cutoff.n_max());
  const Matrix n1 = number_operator(cutoff.n_max());
  const double r2 = std::sqrt(2.0);
  auto quad_x = [&](Mode m) -> Matrix { return embed(Matrix((a1 + a1.adjoint()) / r2), m); };
  auto quad_p = [&](Mode m) -> Matrix {
    return embed(Matrix((a1 - a1.adjoint()) / (kI * r2)), m);
  };
  switch (label) {
    case OperatorLabel::a: return {embed(a1, Mode::A), label};
    case OperatorLabel::a_dag: return {embed(Matrix(a1.adjoint()), Mode::A), label};
    case OperatorLabel::b: return {embed(a1, Mode::B), label};
    case OperatorLabel::b_dag: return {embed(Matrix(a1.adjoint()), Mode::B), label};
    case OperatorLabel::n_a: return {embed(n1, Mode::A), label};
    case OperatorLabel::n_b: return {embed(n1, Mode::B), label};
    case OperatorLabel::x_a: return {quad_x(Mode::A), label};
    case OperatorLabel::p_a: return {quad_p(Mode::A), label};
    case OperatorLabel::x_b: return {quad_x(Mode::B), label};
    case OperatorLabel::p_b: return {quad_p(Mode::B), label};
    case OperatorLabel::custom: break;
  }
  throw ValidationError("mode_operator: label 'custom' has no standard matrix");
}

Complex expectation(const TwoModeState& state, const Matrix& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim())
    throw DimensionError("operator dimension does not match the state");
  if (state.is_pure()) {
    const Vector& psi = state.vector();
    return psi.dot(op * psi);
  }
  // Tr(rho op) = sum_{xy} rho(x,y) op(y,x)
  return state.matrix().cwiseProduct(op.transpose()).sum();
}

Matrix reduced_mode_state(const TwoModeState& state, Mode mode) {
  const int n = state.cutoff().n_max();
  if (state.is_pure()) {
    const Matrix grid = as_grid(state.vector(), n);
    if (mode == Mode::A) return grid * grid.adjoint();
    return grid.transpose() * grid.conjugate();
  }
  const Matrix& rho = state.matrix();
  Matrix out = Matrix::Zero(n, n);
  const FockCutoff& c = state.cutoff();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      Complex sum = 0.0;
      for (int w = 0; w < n; ++w) {
        sum += mode == Mode::A ? rho(c.index(u, w), c.index(v, w)) : rho(c.index(w, u), c.index(w, v));
      }
      out(u, v) = sum;
    }
  }
  return out;
}

void validate_density(const Matrix& rho, bool check_spectrum, double min_eigenvalue_tol) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kNormTol)
    throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kNormTol)
    throw ValidationError("density matrix trace differs from 1");
  if (check_spectrum && min_eigenvalue(rho) < -min_eigenvalue_tol)
    throw ValidationError("density matrix has a negative eigenvalue");
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> rho_eig(rho);
  if (rho_eig.eigenvalues().minCoeff() < -1e-9 || min_eigenvalue(sigma) < -1e-9)
    throw ValidationError("fidelity: input is not positive semidefinite");
  const RealVector roots = rho_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho = rho_eig.eigenvectors() * roots.asDiagonal() * rho_eig.eigenvectors().adjoint();
  const Matrix inner = sqrt_rho * sigma * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Matrix> inner_eig(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double root_fidelity = inner_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_fidelity * root_fidelity, 0.0, 1.0);
}

double fidelity(const Matrix& rho, const Vector& psi) {
  if (rho.rows() != psi.size()) throw DimensionError("fidelity: dimension mismatch");
  return std::clamp(psi.dot(rho * psi).real(), 0.0, 1.0);
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("trace_distance: dimension mismatch");
  const Matrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double restricted_norm(const Matrix& op, const std::vector<Index>& indices) {
  const Index m = static_cast<Index>(indices.size());
  if (m == 0) return 0.0;
  Matrix sub(m, m);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < m; ++c) sub(r, c) = op(indices[r], indices[c]);
  if (sub.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(sub);
  return svd.singularValues()(0);
}

}  // namespace fockchannel
