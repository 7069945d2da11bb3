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
#include <tuple>
#include <vector>

#include <gtest/gtest.h>

#include "fockchannel/photon_stats.hpp"
#include "oracles.hpp"

namespace fc = fockchannel;
using fc::Complex;

namespace {

const std::vector<double> kThetas = {0.2, std::numbers::pi / 6, std::numbers::pi / 4, 1.0, 1.4};
const std::vector<Complex> kAlphas = {0.0, Complex(0.5, 0.5), 1.0, Complex(-1.2, 0.9), Complex(0.0, 2.0)};

struct Moments {
  double mean_a, mean_b, mandel_a, mandel_b, covariance, sum_variance;
};

// Photon-number moments from the Pade beamsplitter applied to |alpha> (x) |n>.
Moments brute_force(Complex alpha, int n, double theta, int n_max) {
  const oracle::Vector in = oracle::kron(oracle::coherent(alpha, n_max), oracle::fock(n, n_max));
  const oracle::Vector psi = oracle::beamsplitter(theta, n_max) * in;
  const oracle::Matrix a = oracle::mode_a(n_max), b = oracle::mode_b(n_max);
  const oracle::Matrix na = a.adjoint() * a, nb = b.adjoint() * b;
  auto ex = [&](const oracle::Matrix& X) { return oracle::expect(psi, X).real(); };
  Moments m{};
  m.mean_a = ex(na);
  m.mean_b = ex(nb);
  const double var_a = ex(na * na) - m.mean_a * m.mean_a;
  const double var_b = ex(nb * nb) - m.mean_b * m.mean_b;
  m.mandel_a = m.mean_a > 0 ? (var_a - m.mean_a) / m.mean_a : 0.0;
  m.mandel_b = m.mean_b > 0 ? (var_b - m.mean_b) / m.mean_b : 0.0;
  m.covariance = ex(na * nb) - m.mean_a * m.mean_b;
  const oracle::Matrix total = na + nb;
  m.sum_variance = ex(total * total) - std::pow(ex(total), 2);
  return m;
}

}  // namespace

TEST(AState, ZeroPhotonsIsCoherentPair) {
  const double c = std::cos(0.6), s = std::sin(0.6);
  const Complex alpha(1.0, 0.5);
  const auto cut = fc::FockCutoff::for_input(alpha, 0);
  const auto A = fc::build_A_state(alpha, 0, c, s, cut);
  const fc::Vector ref = fc::product_vector(fc::coherent_state(c * alpha, cut.n_max()),
                                            fc::coherent_state(-s * alpha, cut.n_max()));
  EXPECT_NEAR(std::norm(ref.dot(A.vector())), 1.0, 1e-9);
}

TEST(AState, SplitSinglePhoton) {
  const double h = 1.0 / std::numbers::sqrt2;
  const fc::FockCutoff cut(6);
  const auto A = fc::build_A_state(0.0, 1, h, h, cut);
  const fc::Matrix rho_a = fc::reduced_mode_state(A, fc::Mode::A);
  EXPECT_NEAR(rho_a(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(rho_a(1, 1).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(rho_a(0, 1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(A.vector()(cut.index(0, 1))), h, 1e-14);
  EXPECT_NEAR(std::abs(A.vector()(cut.index(1, 0))), h, 1e-14);
}

TEST(AState, BothConstructionsAgree) {
  for (auto [alpha, n, theta] : {std::tuple{Complex(1.0), 2, std::numbers::pi / 4},
                                 std::tuple{Complex(0.3, -1.1), 3, 0.9},
                                 std::tuple{Complex(2.0), 1, 1.3}}) {
    const double c = std::cos(theta), s = std::sin(theta);
    const auto cut = fc::FockCutoff::for_input(alpha, n);
    const auto u = fc::build_A_state(alpha, n, c, s, cut);
    const auto w = fc::build_A_state_by_creation(alpha, n, c, s, cut);
    EXPECT_NEAR(std::abs(u.vector().dot(w.vector())), 1.0, 1e-9) << alpha << " " << n;
  }
}

TEST(AState, RejectsSmallCutoff) {
  EXPECT_THROW(fc::build_A_state(2.0, 3, 0.6, 0.8, fc::FockCutoff(6)), fc::CutoffError);
  EXPECT_THROW(fc::build_A_state(1.0, 1, 0.6, 0.6, fc::FockCutoff(20)), fc::ValidationError);
}

TEST(Stats, VacuumConventions) {
  const fc::FockCutoff cut(5);
  const auto vac = fc::TwoModeState::pure(fc::Vector::Unit(cut.dim(), 0), cut);
  const auto st = fc::compute_stats(vac);
  EXPECT_NEAR(st.C, 2.0, 1e-14);
  EXPECT_NEAR(st.covariance, 0.0, 1e-14);
  EXPECT_EQ(st.mandel_a, 0.0);
  EXPECT_EQ(st.mandel_b, 0.0);
  EXPECT_NEAR(st.min_quadrature_variance, 0.5, 1e-14);
}

TEST(Stats, HandExamples) {
  const double h = 1.0 / std::numbers::sqrt2;
  const auto split = fc::compute_stats(fc::build_A_state(0.0, 1, h, h, fc::FockCutoff(8)));
  EXPECT_NEAR(split.mandel_a, -0.5, 1e-8);
  EXPECT_NEAR(fc::mandel_closed_form(0.0, 1, h, h).first, -0.5, 1e-15);

  const auto one = fc::compute_stats(fc::build_A_state(1.0, 1, h, h, fc::FockCutoff::for_input(1.0, 1)));
  EXPECT_NEAR(one.covariance, -0.75, 1e-8);
  EXPECT_NEAR(one.mandel_a, 0.25, 1e-10);
  EXPECT_NEAR(fc::mandel_closed_form(1.0, 1, h, h).first, 0.25, 1e-15);

  const auto two = fc::compute_stats(fc::build_A_state(Complex(0.4, 0.7), 2, std::cos(0.3), std::sin(0.3),
                                                       fc::FockCutoff::for_input(Complex(0.4, 0.7), 2)));
  EXPECT_NEAR(two.C, 6.0, 1e-8);

  const auto [qa, qb] = fc::mandel_closed_form(1.7, 0, 0.6, 0.8);
  EXPECT_EQ(qa, 0.0);
  EXPECT_EQ(qb, 0.0);
}

// Full parameter sweep: n <= 3, |alpha| <= 2, five angles.
TEST(Stats, ClosedFormsAcrossSweep) {
  for (int n = 0; n <= 3; ++n)
    for (Complex alpha : kAlphas)
      for (double theta : kThetas) {
        const double c = std::cos(theta), s = std::sin(theta);
        const auto cut = fc::FockCutoff::for_input(alpha, n);
        const auto st = fc::compute_stats(fc::build_A_state(alpha, n, c, s, cut));
        const double a2 = std::norm(alpha);
        const auto [qa, qb] = fc::mandel_closed_form(alpha, n, c, s);
        SCOPED_TRACE(testing::Message() << "n=" << n << " alpha=" << alpha << " theta=" << theta);
        EXPECT_NEAR(st.covariance, -c * c * s * s * n * (2 * a2 + 1), 1e-8);
        EXPECT_NEAR(st.covariance, fc::covariance_closed_form(alpha, n, c, s), 1e-8);
        EXPECT_NEAR(st.C, 2.0 * (1 + n), 1e-8);
        EXPECT_GE(st.C, 2.0 - 1e-8);
        EXPECT_NEAR(st.sum_variance, a2, 1e-8);
        EXPECT_NEAR(st.shot_level, a2 + n, 1e-8);
        // Var(n_a - n_b) = |alpha|^2 + n sin^2(2 theta) (2 |alpha|^2 + 1): above the
        // shot level only once sin^2(2 theta) (2 |alpha|^2 + 1) >= 1.
        const double spread = 4 * c * c * s * s * (2 * a2 + 1);
        EXPECT_NEAR(st.diff_variance, a2 + n * spread, 1e-8);
        if (spread >= 1.0) EXPECT_GE(st.diff_variance, st.shot_level - 1e-8);
        if (n >= 1) EXPECT_NEAR(st.shot_level - st.sum_variance, n, 1e-8);
        EXPECT_GE(st.min_quadrature_variance, 0.5 - 1e-9);
        EXPECT_NEAR(st.mandel_a, qa, 1e-10);
        EXPECT_NEAR(st.mandel_b, qb, 1e-10);
        EXPECT_GE(st.mandel_a, -1.0);
        EXPECT_GE(st.mandel_b, -1.0);
      }
}

TEST(Stats, MatchesBruteForceMoments) {
  const int n_max = 20;
  for (auto [alpha, n, theta] : {std::tuple{Complex(0.6, 0.2), 1, 0.5}, std::tuple{Complex(-0.4, 0.9), 2, 1.1},
                                 std::tuple{Complex(1.0), 3, std::numbers::pi / 4}}) {
    const auto ref = brute_force(alpha, n, theta, n_max);
    const auto st = fc::compute_stats(fc::build_A_state(alpha, n, std::cos(theta), std::sin(theta),
                                                        fc::FockCutoff::for_input(alpha, n)));
    EXPECT_NEAR(st.mean_a, ref.mean_a, 1e-10);
    EXPECT_NEAR(st.mean_b, ref.mean_b, 1e-10);
    EXPECT_NEAR(st.mandel_a, ref.mandel_a, 1e-10);
    EXPECT_NEAR(st.mandel_b, ref.mandel_b, 1e-10);
    EXPECT_NEAR(st.covariance, ref.covariance, 1e-10);
    EXPECT_NEAR(st.sum_variance, ref.sum_variance, 1e-10);
  }
}

TEST(Stats, SubPoissonianRegime) {
  // 2 c^2 |alpha|^2 < s^2 gives Q_a < 0.
  const double c = std::cos(1.2), s = std::sin(1.2);
  const Complex alpha = 0.3;
  ASSERT_LT(2 * c * c * std::norm(alpha), s * s);
  EXPECT_LT(fc::mandel_closed_form(alpha, 2, c, s).first, 0.0);
}

TEST(EprForm, OverlapIsOne) {
  for (Complex alpha : {Complex(0.0), Complex(1.0), Complex(2.0)}) {
    const auto cut = fc::FockCutoff::for_input(alpha, 1);
    EXPECT_NEAR(fc::epr_form_check(alpha, cut), 1.0, 1e-8) << alpha;
  }
}
