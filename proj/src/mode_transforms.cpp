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

#include "fockchannel/mode_transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace fockchannel {

namespace {

constexpr double kMatchTol = 1e-12;

double frequency_scale(const FrequencySpec& f) {
  return std::max({1.0, std::abs(f.omega_a), std::abs(f.omega_b), std::abs(f.omega_0)});
}

}  // namespace

SchemeParams::SchemeParams(double g, double f, double theta) : g_(g), f_(f), theta_(theta) {
  if (!(g * g + f * f > 0.0)) throw ValidationError("scheme: couplings must satisfy G = sqrt(g^2+f^2) > 0");
  if (!std::isfinite(theta)) throw ValidationError("scheme: theta must be finite");
}

SchemeParams SchemeParams::matched_to(double g, double f) {
  return SchemeParams(g, f, std::atan2(-f, g));
}

SchemeParams SchemeParams::from_angle(double theta) {
  return SchemeParams(std::cos(theta), -std::sin(theta), theta);
}

double SchemeParams::G() const { return std::hypot(g_, f_); }
double SchemeParams::c() const { return std::cos(theta_); }
double SchemeParams::s() const { return std::sin(theta_); }

bool SchemeParams::matched() const {
  return std::abs(s() * g_ + c() * f_) <= kMatchTol * G();
}

FrequencySpec FrequencySpec::resonant(double omega_0, double Omega, int epsilon) {
  FrequencySpec f;
  f.omega_0 = omega_0;
  f.omega_b = omega_0;
  f.omega_a = omega_0 + epsilon * Omega;
  f.Omega = Omega;
  f.epsilon = epsilon;
  f.validate();
  return f;
}

void FrequencySpec::validate() const {
  if (epsilon < -1 || epsilon > 1) throw ValidationError("frequency: epsilon must be -1, 0 or +1");
  if (Omega < 0.0) throw ValidationError("frequency: Omega must be >= 0");
  const double tol = 1e-12 * frequency_scale(*this);
  if (std::abs(omega_a - epsilon * Omega - omega_b) > tol || std::abs(omega_b - omega_0) > tol)
    throw ValidationError("frequency: resonance violated (need omega_a - eps*Omega = omega_b = omega_0)");
}

// ---------------------------------------------------------------------------

SparseMatrix beamsplitter_sparse(double theta, const FockCutoff& cutoff) {
  const int n = cutoff.n_max();
  std::vector<Eigen::Triplet<Complex>> triplets;
  // The generator conserves j + k, so exponentiate one photon-number block at a time.
  for (int total = 0; total <= 2 * (n - 1); ++total) {
    const int j_lo = std::max(0, total - (n - 1));
    const int j_hi = std::min(n - 1, total);
    const int size = j_hi - j_lo + 1;
    // K = i (a^dag b - a b^dag) restricted to the block; Hermitian.
    Matrix K = Matrix::Zero(size, size);
    for (int u = 0; u < size; ++u) {
      const int j = j_lo + u;
      const int k = total - j;
      if (u + 1 < size) {
        // <j+1,k-1| a^dag b |j,k> = sqrt((j+1) k)
        const double amp = std::sqrt(static_cast<double>(j + 1) * k);
        K(u + 1, u) += kI * amp;
        K(u, u + 1) -= kI * amp;
      }
    }
    Matrix block;
    if (size == 1) {
      block = Matrix::Identity(1, 1);
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(K);
      const Vector phases = (-kI * theta * eig.eigenvalues().cast<Complex>()).array().exp();
      block = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    }
    for (int u = 0; u < size; ++u)
      for (int v = 0; v < size; ++v)
        if (block(u, v) != 0.0)
          triplets.emplace_back(cutoff.index(j_lo + u, total - j_lo - u),
                                cutoff.index(j_lo + v, total - j_lo - v), block(u, v));
  }
  SparseMatrix U(cutoff.dim(), cutoff.dim());
  U.setFromTriplets(triplets.begin(), triplets.end());
  return U;
}

Matrix beamsplitter_unitary(double theta, const FockCutoff& cutoff) {
  return Matrix(beamsplitter_sparse(theta, cutoff));
}

Vector phase_shift_diagonal(Mode mode, double mu, const FockCutoff& cutoff) {
  const int n = cutoff.n_max();
  Vector d(cutoff.dim());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      d(cutoff.index(j, k)) = std::polar(1.0, mu * (mode == Mode::A ? j : k));
  return d;
}

Matrix phase_shift(Mode mode, double mu, const FockCutoff& cutoff) {
  return phase_shift_diagonal(mode, mu, cutoff).asDiagonal();
}

std::pair<ModeOperator, ModeOperator> collective_modes(double g, double f, const FockCutoff& cutoff) {
  const double G = std::hypot(g, f);
  if (!(G > 0.0)) throw ValidationError("collective_modes: g = f = 0 has no collective mode");
  const Matrix a = mode_operator(OperatorLabel::a, cutoff).matrix;
  const Matrix b = mode_operator(OperatorLabel::b, cutoff).matrix;
  return {ModeOperator{(g * a + f * b) / G, OperatorLabel::custom},
          ModeOperator{(f * a - g * b) / G, OperatorLabel::custom}};
}

double matching_residual(const SchemeParams& scheme, const FockCutoff& cutoff) {
  const SparseMatrix U = beamsplitter_sparse(scheme.theta(), cutoff);
  const Matrix tau = collective_modes(scheme.g(), scheme.f(), cutoff).second.matrix;
  const auto safe = safe_indices(cutoff);
  double best = std::numeric_limits<double>::infinity();
  for (auto label : {OperatorLabel::a, OperatorLabel::b}) {
    const Matrix port = mode_operator(label, cutoff).matrix;
    const Matrix out = U * (port * Matrix(U.adjoint()));
    for (double sign : {1.0, -1.0}) best = std::min(best, restricted_norm(out - sign * tau, safe));
  }
  return best;
}

IntegralOfMotionReport check_integral_of_motion(const Matrix& H, const Matrix& Z,
                                                const std::vector<Index>& safe,
                                                const Vector& probe,
                                                std::span<const double> times) {
  if (H.rows() != H.cols() || Z.rows() != H.rows() || Z.cols() != H.cols())
    throw DimensionError("integral of motion: H and Z must be square and equally sized");
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("integral of motion: H is not Hermitian");
  if (probe.size() != H.rows()) throw DimensionError("integral of motion: probe size mismatch");

  IntegralOfMotionReport report;
  report.commutator_norm = restricted_norm(H * Z - Z * H, safe);

  if (times.empty()) return report;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const Matrix& V = eig.eigenvectors();
  const Vector coeffs = V.adjoint() * probe;
  const Complex z0 = probe.dot(Z * probe);
  for (double t : times) {
    const Vector phases = (-kI * t * eig.eigenvalues().cast<Complex>()).array().exp();
    const Vector psi_t = V * phases.cwiseProduct(coeffs);
    report.dynamic_drift = std::max(report.dynamic_drift, std::abs(psi_t.dot(Z * psi_t) - z0));
  }
  return report;
}

IntegralOfMotionReport check_integral_of_motion(const Matrix& H, const Matrix& Z,
                                                const FockCutoff& cutoff,
                                                const Vector& probe,
                                                std::span<const double> times) {
  return check_integral_of_motion(H, Z, safe_indices(cutoff), probe, times);
}

double EquivalentScheme::frame_angle(double t) const {
  return is_identity() ? 0.0 : -freq.epsilon * freq.Omega * t;
}

Complex EquivalentScheme::interaction_phase(double t) const {
  return std::polar(1.0, -frame_angle(t));
}

Complex EquivalentScheme::splitter_phase(double t) const {
  return std::polar(1.0, frame_angle(t));
}

EquivalentScheme unitary_equivalent_scheme(const SchemeParams& scheme, const FrequencySpec& freq) {
  freq.validate();
  return EquivalentScheme{scheme, freq};
}

}  // namespace fockchannel
