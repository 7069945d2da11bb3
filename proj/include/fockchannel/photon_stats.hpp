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

// Counting and quadrature statistics of the coherent + Fock beamsplitter
// output A(n, alpha) = U(theta) |alpha> (x) |n>.

#ifndef FOCKCHANNEL_PHOTON_STATS_HPP
#define FOCKCHANNEL_PHOTON_STATS_HPP

#include <utility>

#include "fockchannel/fock_core.hpp"

namespace fockchannel {

struct StatsReport {
  double mean_a = 0.0;
  double mean_b = 0.0;
  /// Mandel Q = (Var n - <n>)/<n>; reported as 0 when <n> = 0.
  double mandel_a = 0.0;
  double mandel_b = 0.0;
  /// <n_a n_b> - <n_a><n_b>
  double covariance = 0.0;
  /// Var(n_a + n_b), Var(n_a - n_b) and the shot level <n_a + n_b>.
  double sum_variance = 0.0;
  double diff_variance = 0.0;
  double shot_level = 0.0;
  /// Minimum of Var(x_phi) over both modes and the phase scan.
  double min_quadrature_variance = 0.0;
  /// Var(x_a + x_b) + Var(p_a - p_b); separable states give C >= 2.
  double C = 0.0;
};

inline constexpr int kQuadraturePhases = 64;

/// Beamsplitter output of |alpha> (x) |n> at angle atan2(s, c).
TwoModeState build_A_state(Complex alpha, int n, double c, double s, const FockCutoff& cutoff);

/// Same state built as (s a^dag + c b^dag)^n |c alpha> (x) |-s alpha>, normalized.
TwoModeState build_A_state_by_creation(Complex alpha, int n, double c, double s, const FockCutoff& cutoff);

StatsReport compute_stats(const TwoModeState& state);

/// (Q_a, Q_b) for A(n, alpha):
///   Q_a = s^2 n (2 c^2 |alpha|^2 - s^2) / (c^2 |alpha|^2 + s^2 n),
///   Q_b = c^2 n (2 s^2 |alpha|^2 - c^2) / (s^2 |alpha|^2 + c^2 n).
/// A vanishing mean photon number yields 0.
std::pair<double, double> mandel_closed_form(Complex alpha, int n, double c, double s);

/// -c^2 s^2 n (2 |alpha|^2 + 1)
double covariance_closed_form(Complex alpha, int n, double c, double s);

/// |<A(1, alpha)|RHS>| with RHS = R_b(pi) (|t0 t1> - |t1 t0>) normalized,
/// t_m = a^dag^m |alpha / sqrt2>, at c = s = 1/sqrt2. R_b(pi) maps the
/// equal-amplitude pair onto this library's splitter sign convention.
double epr_form_check(Complex alpha, const FockCutoff& cutoff);

}  // namespace fockchannel

#endif  // FOCKCHANNEL_PHOTON_STATS_HPP
