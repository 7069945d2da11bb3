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

// Passive optical elements and the collective-mode decomposition.
//
// Convention: the beamsplitter is U(theta) = exp(theta (a^dag b - a b^dag)) and
// acts on states as psi -> U psi. Its Heisenberg action is
//   U^dag a U =  c a + s b,      U^dag b U = -s a + c b,
// with c = cos(theta), s = sin(theta). For couplings (g, f) the collective
// modes are r = (g a + f b)/G and tau = (f a - g b)/G. A splitter is matched to
// (g, f) when U a U^dag = r, i.e. s g = -c f; then U b U^dag = -tau, so the
// b port carries the non-interacting mode.

#ifndef FOCKCHANNEL_MODE_TRANSFORMS_HPP
#define FOCKCHANNEL_MODE_TRANSFORMS_HPP

#include <span>
#include <utility>
#include <vector>

#include "fockchannel/fock_core.hpp"

namespace fockchannel {

class SchemeParams {
 public:
  /// Requires g^2 + f^2 > 0.
  SchemeParams(double g, double f, double theta);

  /// Splitter angle aligned to (g, f): theta = atan2(-f, g).
  static SchemeParams matched_to(double g, double f);
  /// Unit-norm couplings aligned to a given angle: g = cos(theta), f = -sin(theta).
  static SchemeParams from_angle(double theta);

  double g() const { return g_; }
  double f() const { return f_; }
  double G() const;
  double theta() const { return theta_; }
  double c() const;
  double s() const;
  bool matched() const;

 private:
  double g_;
  double f_;
  double theta_;
};

/// Physical frequencies for the frame-equivalent schemes; omega_a - eps*Omega
/// must equal omega_b = omega_0.
struct FrequencySpec {
  double omega_a = 1.0;
  double omega_b = 1.0;
  double omega_0 = 1.0;
  double Omega = 0.0;
  int epsilon = 0;

  static FrequencySpec resonant(double omega_0, double Omega, int epsilon);
  /// Throws ValidationError on a resonance violation or invalid epsilon.
  void validate() const;
};

// Operations.

SparseMatrix beamsplitter_sparse(double theta, const FockCutoff& cutoff);
Matrix beamsplitter_unitary(double theta, const FockCutoff& cutoff);

/// exp(i mu n_mode), diagonal.
Matrix phase_shift(Mode mode, double mu, const FockCutoff& cutoff);
Vector phase_shift_diagonal(Mode mode, double mu, const FockCutoff& cutoff);

/// r = (g a + f b)/G, tau = (f a - g b)/G.
std::pair<ModeOperator, ModeOperator> collective_modes(double g, double f, const FockCutoff& cutoff);

/// Smallest of ||U p U^dag -/+ tau|| over output ports p in {a, b}, on the
/// safe subspace. Zero (to rounding) exactly when the scheme is matched.
double matching_residual(const SchemeParams& scheme, const FockCutoff& cutoff);

struct IntegralOfMotionReport {
  double commutator_norm = 0.0;
  double dynamic_drift = 0.0;
};

/// Spectral norm of [H, Z] on the `safe` basis indices, plus the largest
/// deviation |<Z>(t) - <Z>(0)| over `times` under exp(-iHt) from `probe`.
IntegralOfMotionReport check_integral_of_motion(const Matrix& H, const Matrix& Z,
                                                const std::vector<Index>& safe,
                                                const Vector& probe,
                                                std::span<const double> times);

/// Two-mode convenience form; the safe subspace is total photon number <= n_max - 2.
IntegralOfMotionReport check_integral_of_motion(const Matrix& H, const Matrix& Z,
                                                const FockCutoff& cutoff,
                                                const Vector& probe,
                                                std::span<const double> times);

/// Scheme seen through the frame rotation R_a. For eps = +-1 the splitter
/// generator becomes a^dag b e^{-i eps Omega t} - a b^dag e^{i eps Omega t} and the
/// atomic coupling g a e^{i eps Omega t} + f b; both equal R (.) R^dag with
/// R = exp(i mu n_a), mu = -eps Omega t.
struct EquivalentScheme {
  SchemeParams base;
  FrequencySpec freq;

  bool is_identity() const { return freq.epsilon == 0 || freq.Omega == 0.0; }
  /// mu(t) of the frame rotation R_a.
  double frame_angle(double t) const;
  /// Phase factor multiplying g a in the transformed interaction.
  Complex interaction_phase(double t) const;
  /// Phase factor multiplying a^dag b in the transformed splitter generator.
  Complex splitter_phase(double t) const;
};

EquivalentScheme unitary_equivalent_scheme(const SchemeParams& scheme, const FrequencySpec& freq);

}  // namespace fockchannel

#endif  // FOCKCHANNEL_MODE_TRANSFORMS_HPP
