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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fockchannel/charfunc.hpp"
#include "fockchannel/mode_transforms.hpp"
#include "fockchannel/pipeline.hpp"
#include "oracles.hpp"

namespace fc = fockchannel;
using fc::Complex;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

std::vector<Complex> axis(double phase = 0.0) { return fc::grid_axis(11, 2.0, phase); }

// Beamsplitter output of |alpha> (x) |n> built with the Pade oracle.
fc::TwoModeState oracle_bs_output(Complex alpha, int n, double theta, int n_max) {
  const fc::Vector in = oracle::kron(oracle::coherent(alpha, n_max), oracle::fock(n, n_max));
  const fc::Vector out = oracle::beamsplitter(theta, n_max) * in;
  return fc::TwoModeState::pure(out / out.norm(), fc::FockCutoff(n_max));
}

}  // namespace

TEST(GridAxis, EvenlySpacedAlongPhase) {
  const auto a = fc::grid_axis(5, 2.0, std::numbers::pi / 2);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_NEAR(std::abs(a[0] - Complex(0, -2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[4] - Complex(0, 2)), 0.0, 1e-15);
  EXPECT_EQ(fc::grid_axis(1, 2.0, 0.0).size(), 1u);
}

TEST(Displacement, MatchesPadeOracle) {
  for (Complex beta : {Complex(0.3, -0.4), Complex(-1.5, 0.7), Complex(2.0, 0.0)}) {
    const fc::Matrix D = fc::normal_ordered_displacement(beta, 14);
    EXPECT_LT((D - oracle::displacement_normal(beta, 14)).cwiseAbs().maxCoeff(), 1e-11) << beta;
  }
}

TEST(Displacement, ExactOnVacuum) {
  const fc::Matrix D = fc::normal_ordered_displacement(Complex(1.3, -0.2), 10);
  EXPECT_EQ(D(0, 0), Complex(1.0, 0.0));
}

TEST(CharfuncNumeric, VacuumIsOne) {
  const fc::FockCutoff cut(8);
  const auto vac = fc::TwoModeState::pure(fc::Vector::Unit(cut.dim(), 0), cut);
  for (Complex b1 : axis())
    for (Complex b2 : axis(0.7)) EXPECT_EQ(fc::charfunc_numeric(vac, b1, b2), Complex(1.0, 0.0));
}

TEST(CharfuncNumeric, SingleModeExamples) {
  const int n_max = 30;
  const fc::Vector coh = oracle::coherent(1.0, n_max);
  const Complex at_i = fc::charfunc_numeric(fc::Matrix(coh * coh.adjoint()), Complex(0, 1));
  EXPECT_LT(std::abs(at_i - std::exp(Complex(0, 2))), 1e-10);

  const fc::Vector one = oracle::fock(1, 6);
  EXPECT_NEAR(std::abs(fc::charfunc_numeric(fc::Matrix(one * one.adjoint()), 0.5) - 0.75), 0.0, 1e-12);
}

TEST(CharfuncNumeric, RejectsOutOfBound) {
  const fc::FockCutoff cut(4);
  const auto vac = fc::TwoModeState::pure(fc::Vector::Unit(cut.dim(), 0), cut);
  EXPECT_THROW(fc::charfunc_numeric(vac, Complex(2.1, 0), 0.0), fc::ValidationError);
  EXPECT_THROW(fc::charfunc_numeric(vac, 0.0, Complex(0, -2.5)), fc::ValidationError);
  EXPECT_NO_THROW(fc::charfunc_numeric(vac, Complex(0, 2.0), 2.0));
}

TEST(CharfuncNumeric, NormalizationAndConjugationSymmetry) {
  const auto state = oracle_bs_output(Complex(0.8, 0.3), 2, 0.4, 24);
  EXPECT_LT(std::abs(fc::charfunc_numeric(state, 0.0, 0.0) - 1.0), 1e-10);
  for (Complex b1 : axis(0.3))
    for (Complex b2 : axis(1.1)) {
      const Complex v = fc::charfunc_numeric(state, b1, b2);
      EXPECT_LT(std::abs(fc::charfunc_numeric(state, -b1, -b2) - std::conj(v)), 1e-10);
    }
}

TEST(FockFactor, EqualsLaguerre) {
  for (int n = 0; n <= 5; ++n)
    for (int i = 0; i <= 20; ++i) {
      const double x = 0.2 * i;
      EXPECT_NEAR(fc::fock_factor(n, x), oracle::laguerre(n, x), 1e-10) << n << " " << x;
    }
  EXPECT_DOUBLE_EQ(fc::fock_factor(1, 0.25), 0.75);
}

TEST(BsClosedForm, Examples) {
  const double c = kInvSqrt2, s = kInvSqrt2;
  EXPECT_EQ(fc::charfunc_bs_closed_form(1.0, 1, c, s, 0.0, 0.0), Complex(1.0, 0.0));
  // Real alpha and real beta1: the coherent factor is exactly 1.
  EXPECT_NEAR(std::abs(fc::charfunc_bs_closed_form(1.0, 1, c, s, 0.2, 0.0) - 0.98), 0.0, 1e-15);
}

TEST(BsClosedForm, MatchesNumericOnGrid) {
  for (auto [alpha, n, theta] : {std::tuple{Complex(1.0, 0.0), 1, -std::numbers::pi / 4},
                                 std::tuple{Complex(0.5, -0.8), 2, 0.6},
                                 std::tuple{Complex(0.0, 1.2), 3, 1.2}}) {
    const auto state = oracle_bs_output(alpha, n, theta, fc::FockCutoff::for_input(alpha, n).n_max());
    const double c = std::cos(theta), s = std::sin(theta);
    double worst = 0.0;
    for (Complex b1 : axis(0.4))
      for (Complex b2 : axis(-0.9)) {
        const Complex ref = fc::charfunc_bs_closed_form(alpha, n, c, s, b1, b2);
        worst = std::max(worst, std::abs(fc::charfunc_numeric(state, b1, b2) - ref));
      }
    EXPECT_LT(worst, 1e-8) << alpha << " n=" << n;
  }
}

TEST(AbsorbedClosedForm, ReducesWithoutAbsorption) {
  const double c = std::cos(0.7), s = std::sin(0.7);
  for (Complex b1 : axis(0.2))
    for (Complex b2 : axis(1.3)) {
      const Complex with_q = fc::charfunc_absorbed_closed_form(Complex(0.4, 1.0), 2, c, s, 1.0, b1, b2);
      EXPECT_LT(std::abs(with_q - fc::charfunc_bs_closed_form(Complex(0.4, 1.0), 2, c, s, b1, b2)), 1e-12);
    }
}

TEST(AbsorbedClosedForm, OutputFrameFactorizes) {
  const double c = std::cos(-0.5), s = std::sin(-0.5), q = 0.6;
  const Complex alpha(1.0, -0.4);
  for (Complex b1 : axis(0.3))
    for (Complex b2 : axis(2.0)) {
      const Complex value =
          fc::charfunc_absorbed_closed_form(alpha, 2, c, s, q, b1, b2, fc::CharFrame::SchemeOutput);
      const Complex coherent = std::exp(q * (b1 * std::conj(alpha) - std::conj(b1) * alpha));
      EXPECT_LT(std::abs(value - coherent * oracle::laguerre(2, std::norm(b2))), 1e-12);
    }
}

TEST(AbsorbedClosedForm, MatchesChannelStates) {
  const Complex alpha(0.9, 0.4);
  const int n = 2;
  const auto scheme = fc::SchemeParams::matched_to(0.6, 0.8);
  const auto absorber = fc::AbsorberParams::from_decay(0.7, scheme);
  const auto states = fc::propagate_scheme(alpha, n, scheme, absorber);
  const double c = scheme.c(), s = scheme.s(), q = absorber.q();
  double after_absorber = 0.0, after_output = 0.0;
  for (Complex b1 : axis(0.5))
    for (Complex b2 : axis(-0.2)) {
      after_absorber = std::max(
          after_absorber, std::abs(fc::charfunc_numeric(states.absorber_output, b1, b2) -
                                   fc::charfunc_absorbed_closed_form(alpha, n, c, s, q, b1, b2)));
      after_output = std::max(
          after_output, std::abs(fc::charfunc_numeric(states.output, b1, b2) -
                                 fc::charfunc_absorbed_closed_form(alpha, n, c, s, q, b1, b2,
                                                                   fc::CharFrame::SchemeOutput)));
    }
  EXPECT_LT(after_absorber, 1e-6);
  EXPECT_LT(after_output, 1e-6);
}

TEST(CharGrid, RowMajorLayout) {
  const fc::FockCutoff cut(6);
  const auto vac = fc::TwoModeState::pure(fc::Vector::Unit(cut.dim(), 0), cut);
  const std::vector<Complex> b1 = {0.1, 0.2, 0.3};
  const std::vector<Complex> b2 = {Complex(0, 1), Complex(0, 2)};
  const auto grid = fc::charfunc_grid(vac, b1, b2);
  ASSERT_EQ(grid.samples.size(), 6u);
  EXPECT_EQ(grid.samples[1].beta1, b1[0]);
  EXPECT_EQ(grid.samples[1].beta2, b2[1]);
  EXPECT_EQ(grid.samples[2].beta1, b1[1]);
}
