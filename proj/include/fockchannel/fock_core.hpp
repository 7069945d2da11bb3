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

// Truncated two-mode Fock space: basis |j,k> with 0 <= j,k < n_max lives at
// index j * n_max + k (mode a is the slow index).

#ifndef FOCKCHANNEL_FOCK_CORE_HPP
#define FOCKCHANNEL_FOCK_CORE_HPP

#include <cmath>
#include <string_view>
#include <variant>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "fockchannel/types.hpp"

namespace fockchannel {

inline constexpr int kDefaultMargin = 2;
inline constexpr int kDefaultCutoffCap = 40;
inline constexpr double kTailBound = 1e-12;

class FockCutoff {
 public:
  explicit FockCutoff(int n_max, int margin = kDefaultMargin);

  /// Cutoff from the truncation rule n_max = n + ceil(|alpha|^2 + 8|alpha|) + 10,
  /// limited to `cap`.
  static FockCutoff for_input(Complex alpha, int n, int margin = kDefaultMargin,
                              int cap = kDefaultCutoffCap);

  int n_max() const { return n_max_; }
  int margin() const { return margin_; }
  Index dim() const { return static_cast<Index>(n_max_) * n_max_; }
  Index index(int j, int k) const { return static_cast<Index>(j) * n_max_ + k; }
  bool in_leakage_band(int level) const { return level >= n_max_ - margin_; }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  int n_max_;
  int margin_;
};

enum class Mode { A, B };

enum class OperatorLabel { a, a_dag, b, b_dag, n_a, n_b, x_a, p_a, x_b, p_b, custom };

std::string_view to_string(OperatorLabel label);

struct ModeOperator {
  Matrix matrix;
  OperatorLabel label = OperatorLabel::custom;
};

/// Pure vector or density matrix over a two-mode truncated Fock basis.
class TwoModeState {
 public:
  /// Requires unit norm within 1e-10.
  static TwoModeState pure(Vector psi, const FockCutoff& cutoff);
  /// Requires a Hermitian, unit-trace, positive semidefinite matrix.
  static TwoModeState mixed(Matrix rho, const FockCutoff& cutoff);
  /// Hermiticity and trace are checked; the eigenvalue check is skipped. For
  /// outputs of maps that preserve positivity by construction.
  static TwoModeState mixed_trusted(Matrix rho, const FockCutoff& cutoff);

  bool is_pure() const { return std::holds_alternative<Vector>(data_); }
  const Vector& vector() const;
  const Matrix& matrix() const;
  Matrix density() const;
  const FockCutoff& cutoff() const { return cutoff_; }
  Index dim() const { return cutoff_.dim(); }

  /// Probability on basis states with either index inside the margin band.
  double leakage() const;

 private:
  TwoModeState(std::variant<Vector, Matrix> data, const FockCutoff& cutoff)
      : data_(std::move(data)), cutoff_(cutoff) {}

  std::variant<Vector, Matrix> data_;
  FockCutoff cutoff_;
};

// Single-mode building blocks.

/// Truncated annihilation operator, a|j> = sqrt(j)|j-1>.
template <typename Real = double>
MatrixT<Real> annihilation(int n_max) {
  MatrixT<Real> a = MatrixT<Real>::Zero(n_max, n_max);
  for (int j = 1; j < n_max; ++j) a(j - 1, j) = std::sqrt(static_cast<Real>(j));
  return a;
}

template <typename Real = double>
MatrixT<Real> number_operator(int n_max) {
  MatrixT<Real> n = MatrixT<Real>::Zero(n_max, n_max);
  for (int j = 0; j < n_max; ++j) n(j, j) = static_cast<Real>(j);
  return n;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& lhs, const Eigen::MatrixBase<B>& rhs) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::kroneckerProduct(lhs.derived(), rhs.derived());
  return out;
}

/// Two-mode operator acting as `op` on one mode and identity on the other.
template <typename Derived>
auto embed(const Eigen::MatrixBase<Derived>& op, Mode mode) {
  using Scalar = typename Derived::Scalar;
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const M id = M::Identity(op.rows(), op.cols());
  return mode == Mode::A ? kron(op, id) : kron(id, op);
}

/// Coherent state |alpha> truncated to n_max levels and renormalized.
Vector coherent_state(Complex alpha, int n_max);
Vector fock_state(int n, int n_max);

/// P(N >= k) for N ~ Poisson(mean).
double poisson_tail(double mean, int k);

/// psi_a (x) psi_b in the two-mode index order.
Vector product_vector(const Vector& psi_a, const Vector& psi_b);

/// Column-major view helpers: amplitudes psi[j*n+k] as an n x n grid (j, k).
Matrix as_grid(const Vector& psi, int n_max);
Vector from_grid(const Matrix& grid);

/// Basis indices with total photon number j + k <= n_max - 2.
std::vector<Index> safe_indices(const FockCutoff& cutoff);

// Operations.

/// |alpha>_a (x) |n>_b, renormalized after truncation.
TwoModeState build_input_state(Complex alpha, int n, const FockCutoff& cutoff);

ModeOperator mode_operator(OperatorLabel label, const FockCutoff& cutoff);

Complex expectation(const TwoModeState& state, const Matrix& op);
inline Complex expectation(const TwoModeState& state, const ModeOperator& op) {
  return expectation(state, op.matrix);
}

/// Partial trace over the other mode; returns an n_max x n_max density matrix.
Matrix reduced_mode_state(const TwoModeState& state, Mode mode);

/// Squared-overlap Uhlmann fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Matrix& rho, const Matrix& sigma);
/// F = <psi|rho|psi>.
double fidelity(const Matrix& rho, const Vector& psi);

double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Throws ValidationError unless `rho` is Hermitian and unit trace within 1e-10
/// and, if `check_spectrum`, its smallest eigenvalue is >= -min_eigenvalue_tol.
void validate_density(const Matrix& rho, bool check_spectrum = true,
                      double min_eigenvalue_tol = 1e-9);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& hermitian);

/// Spectral norm of the principal submatrix on `indices`.
double restricted_norm(const Matrix& op, const std::vector<Index>& indices);

}  // namespace fockchannel

#endif  // FOCKCHANNEL_FOCK_CORE_HPP
