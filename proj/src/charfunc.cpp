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

#include "fockchannel/charfunc.hpp"

#include <cmath>

namespace fockchannel {

namespace {

void check_bound(Complex beta) {
  if (std::abs(beta) > kCharfuncBound + 1e-12)
    throw ValidationError("charfunc: |beta| exceeds the grid bound 2");
}

// Tr(rho (D1 (x) D2)) for a two-mode density matrix.
Complex trace_with_product(const TwoModeState& state, const Matrix& d1, const Matrix& d2) {
  const int n = state.cutoff().n_max();
  if (state.is_pure()) {
    const Matrix grid = as_grid(state.vector(), n);
    // (D1 (x) D2) psi  <->  D1 Psi D2^T
    return grid.conjugate().cwiseProduct(d1 * grid * d2.transpose()).sum();
  }
  const Matrix op = kron(d1, d2);
  return state.matrix().cwiseProduct(op.transpose()).sum();
}

}  // namespace

std::vector<Complex> grid_axis(int count, double bound, double phase) {
  std::vector<Complex> out;
  if (count <= 0) return out;
  const Complex dir = std::polar(1.0, phase);
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : -bound + 2.0 * bound * i / (count - 1);
    out.push_back(t * dir);
  }
  return out;
}

Matrix normal_ordered_displacement(Complex beta, int n_max) {
  // a and a^dag are nilpotent on the truncated space, so both exponentials are
  // finite sums: exp(beta a^dag)_{mk} = beta^(m-k) sqrt(m!/k!) / (m-k)!.
  Matrix raise = Matrix::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) {
    raise(k, k) = 1.0;
    for (int m = k + 1; m < n_max; ++m)
      raise(m, k) = raise(m - 1, k) * beta * std::sqrt(static_cast<double>(m)) / static_cast<double>(m - k);
  }
  // exp(-beta* a) = (exp(-beta a^dag))^dag.
  Matrix lower = Matrix::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) {
    lower(k, k) = 1.0;
    for (int m = k + 1; m < n_max; ++m)
      lower(m, k) = lower(m - 1, k) * (-beta) * std::sqrt(static_cast<double>(m)) / static_cast<double>(m - k);
  }
  return raise * lower.adjoint();
}

Complex charfunc_numeric(const TwoModeState& state, Complex beta1, Complex beta2) {
  check_bound(beta1);
  check_bound(beta2);
  const int n = state.cutoff().n_max();
  return trace_with_product(state, normal_ordered_displacement(beta1, n), normal_ordered_displacement(beta2, n));
}

Complex charfunc_numeric(const Matrix& rho, Complex beta) {
  check_bound(beta);
  if (rho.rows() != rho.cols()) throw DimensionError("charfunc: density must be square");
  const Matrix d = normal_ordered_displacement(beta, static_cast<int>(rho.rows()));
  return rho.cwiseProduct(d.transpose()).sum();
}

CharGrid charfunc_grid(const TwoModeState& state, std::span<const Complex> beta1s,
                       std::span<const Complex> beta2s) {
  const int n = state.cutoff().n_max();
  for (Complex b : beta1s) check_bound(b);
  for (Complex b : beta2s) check_bound(b);
  std::vector<Matrix> d2;
  d2.reserve(beta2s.size());
  for (Complex b : beta2s) d2.push_back(normal_ordered_displacement(b, n));
  CharGrid grid;
  grid.samples.reserve(beta1s.size() * beta2s.size());
  for (Complex b1 : beta1s) {
    const Matrix d1 = normal_ordered_displacement(b1, n);
    for (std::size_t k = 0; k < beta2s.size(); ++k)
      grid.samples.push_back({b1, beta2s[k], trace_with_product(state, d1, d2[k])});
  }
  return grid;
}

double fock_factor(int n, double x) {
  double term = 1.0;  // C(n,k) (-x)^k / k! at k = 0
  double total = 1.0;
  for (int k = 1; k <= n; ++k) {
    term *= -x * static_cast<double>(n - k + 1) / (static_cast<double>(k) * k);
    total += term;
  }
  return total;
}

Complex charfunc_bs_closed_form(Complex alpha, int n, double c, double s, Complex beta1, Complex beta2) {
  const Complex h = c * beta1 - s * beta2;
  const Complex e = s * beta1 + c * beta2;
  return std::exp(h * std::conj(alpha) - std::conj(h) * alpha) * fock_factor(n, std::norm(e));
}

Complex charfunc_absorbed_closed_form(Complex alpha, int n, double c, double s, double q, Complex beta1,
                                      Complex beta2, CharFrame frame) {
  Complex h = beta1;
  Complex e = beta2;
  if (frame == CharFrame::AbsorberOutput) {
    h = c * beta1 - s * beta2;
    e = s * beta1 + c * beta2;
  }
  return std::exp(q * (h * std::conj(alpha) - std::conj(h) * alpha)) * fock_factor(n, std::norm(e));
}

}  // namespace fockchannel
