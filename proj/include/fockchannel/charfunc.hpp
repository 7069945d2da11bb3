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

// Normally ordered characteristic function
//   C_N(beta1, beta2) = Tr{ rho D_N(beta1; a) D_N(beta2; b) },
//   D_N(beta; c) = exp(beta c^dag) exp(-beta^* c).

#ifndef FOCKCHANNEL_CHARFUNC_HPP
#define FOCKCHANNEL_CHARFUNC_HPP

#include <span>
#include <vector>

#include "fockchannel/fock_core.hpp"

namespace fockchannel {

inline constexpr double kCharfuncBound = 2.0;

struct CharSample {
  Complex beta1;
  Complex beta2;
  Complex value;
};

/// Samples of C_N on a product grid of beta1 x beta2 values, row-major in
/// (beta1 index, beta2 index).
struct CharGrid {
  std::vector<CharSample> samples;
};

/// Evenly spaced points t * exp(i phase), t in [-bound, bound].
std::vector<Complex> grid_axis(int count, double bound, double phase);

/// Single-mode normal-ordered displacement on n_max levels.
Matrix normal_ordered_displacement(Complex beta, int n_max);

/// Throws ValidationError if |beta1| or |beta2| exceeds the grid bound.
Complex charfunc_numeric(const TwoModeState& state, Complex beta1, Complex beta2);
/// Single-mode density matrix.
Complex charfunc_numeric(const Matrix& rho, Complex beta);

CharGrid charfunc_grid(const TwoModeState& state, std::span<const Complex> beta1s,
                       std::span<const Complex> beta2s);

/// sum_k C(n,k) (-1)^k x^k / k!  (x = |beta|^2); equals the Laguerre polynomial L_n(x).
double fock_factor(int n, double x);

/// Beamsplitter output of |alpha> (x) |n>:
///   exp(h alpha^* - h^* alpha) * fock_factor(n, |e|^2),
///   h = c beta1 - s beta2, e = s beta1 + c beta2.
Complex charfunc_bs_closed_form(Complex alpha, int n, double c, double s, Complex beta1, Complex beta2);

enum class CharFrame {
  /// State leaving the absorber; arguments are the absorber-frame (beta1, beta2).
  AbsorberOutput,
  /// State after the output splitter; arguments are that state's own
  /// (beta1', beta2') = (c beta1 - s beta2, s beta1 + c beta2).
  SchemeOutput,
};

/// Absorbed form exp[q (h alpha^* - h^* alpha)] * fock_factor(n, |e|^2). In the
/// SchemeOutput frame this reads exp[q (beta1 alpha^* - c.c.)] * fock_factor(n, |beta2|^2).
Complex charfunc_absorbed_closed_form(Complex alpha, int n, double c, double s, double q, Complex beta1,
                                      Complex beta2, CharFrame frame = CharFrame::AbsorberOutput);

}  // namespace fockchannel

#endif  // FOCKCHANNEL_CHARFUNC_HPP
