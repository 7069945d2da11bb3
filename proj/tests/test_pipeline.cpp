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

#include <gtest/gtest.h>

#include "fockchannel/pipeline.hpp"
#include "oracles.hpp"

namespace fc = fockchannel;
using fc::Complex;

namespace {

const fc::SchemeParams kBalanced = fc::SchemeParams::matched_to(1.0, 1.0);

fc::ChannelReport channel(Complex alpha, int n, double Mz, const fc::ChannelOptions& options = {}) {
  return fc::run_channel(alpha, n, kBalanced, fc::AbsorberParams::from_decay(Mz, kBalanced), options);
}

void expect_reports_near(const fc::ChannelReport& x, const fc::ChannelReport& y, double tol) {
  EXPECT_NEAR(x.fidelity_b, y.fidelity_b, tol);
  EXPECT_NEAR(std::abs(x.amplitude_a_out - y.amplitude_a_out), 0.0, tol);
  EXPECT_NEAR(x.mean_b_out, y.mean_b_out, tol);
  EXPECT_NEAR(x.stats.covariance, y.stats.covariance, tol);
  EXPECT_NEAR(x.stats.C, y.stats.C, tol);
  EXPECT_NEAR(x.stats.mandel_a, y.stats.mandel_a, tol);
}

}  // namespace

TEST(Channel, VacuumPassesUnchanged) {
  for (double Mz : {0.0, 0.7, 2.0}) {
    const auto r = channel(0.0, 0, Mz);
    EXPECT_NEAR(r.fidelity_b, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(r.amplitude_a_out), 0.0, 1e-14);
    EXPECT_TRUE(r.meets_contract(fc::model_tolerance(fc::AbsorberModel::Analytic)));
  }
}

TEST(Channel, ReproducesFockState) {
  const auto r = channel(1.0, 1, 1.0);
  EXPECT_GE(r.fidelity_b, 1.0 - 1e-6);
  EXPECT_NEAR(std::abs(r.amplitude_a_out - std::exp(-1.0)), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(r.expected_amplitude - std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_NEAR(r.mean_b_out, 1.0, 1e-6);
  EXPECT_TRUE(r.meets_contract(fc::model_tolerance(fc::AbsorberModel::Analytic)));
  EXPECT_EQ(r.params.n, 1);
  EXPECT_EQ(r.params.model, "analytic");
}

TEST(Channel, AnyMatchedCouplings) {
  const Complex alpha(0.8, -0.6);
  for (auto [g, f] : {std::pair{0.3, 0.9}, std::pair{1.0, -0.4}, std::pair{-0.7, 0.2}}) {
    const auto scheme = fc::SchemeParams::matched_to(g, f);
    const auto absorber = fc::AbsorberParams::from_decay(0.8, scheme);
    const auto r = fc::run_channel(alpha, 2, scheme, absorber);
    EXPECT_GE(r.fidelity_b, 1.0 - 1e-6) << g << "," << f;
    EXPECT_NEAR(std::abs(r.amplitude_a_out - alpha * std::exp(-0.8)), 0.0, 1e-6);
  }
}

TEST(Channel, DecoherenceFreeAgainstControl) {
  for (int n = 0; n <= 3; ++n)
    for (double alpha : {0.0, 1.0, 2.0})
      for (double Mz : {0.5, 1.0}) {
        const auto r = channel(alpha, n, Mz);
        EXPECT_GE(r.fidelity_b, 1.0 - 1e-5) << n << " " << alpha << " " << Mz;
        const auto absorber = fc::AbsorberParams::from_decay(Mz, kBalanced);
        const auto ctl = fc::run_control(n, absorber, fc::FockCutoff::for_input(0.0, n));
        const double q = std::exp(-Mz);
        EXPECT_NEAR(ctl.fidelity_b, std::pow(q, 2 * n), 1e-12);
        if (n >= 1) EXPECT_LT(ctl.fidelity_b, r.fidelity_b);
      }
}

TEST(Control, Examples) {
  const auto absorber = fc::AbsorberParams::from_decay(1.0, kBalanced);
  const auto one = fc::run_control(1, absorber, fc::FockCutoff(8));
  EXPECT_NEAR(one.fidelity_b, std::exp(-2.0), 1e-8);
  EXPECT_NEAR(one.mean_b_out, std::exp(-2.0), 1e-12);
  EXPECT_NEAR(fc::run_control(0, absorber, fc::FockCutoff(8)).fidelity_b, 1.0, 1e-15);
  EXPECT_NEAR(fc::run_control(3, fc::AbsorberParams::from_decay(0.0, kBalanced), fc::FockCutoff(8)).fidelity_b,
              1.0, 1e-15);
  EXPECT_THROW(fc::run_control(7, absorber, fc::FockCutoff(8)), fc::CutoffError);
}

TEST(Channel, RefusesUnmatchedScheme) {
  const fc::SchemeParams off(1.0, 1.0, 0.3);
  ASSERT_FALSE(off.matched());
  EXPECT_THROW(fc::run_channel(1.0, 1, off, fc::AbsorberParams::from_decay(0.5, off)), fc::ValidationError);
}

TEST(Channel, SameOrientationIsNotProtected) {
  fc::ChannelOptions same;
  same.second_splitter = fc::SplitterOrientation::Same;
  const auto protected_run = channel(1.0, 1, 1.0);
  const auto other = channel(1.0, 1, 1.0, same);
  EXPECT_LT(other.fidelity_b, 1.0 - 1e-3);
  EXPECT_LT(other.fidelity_b, protected_run.fidelity_b);
  EXPECT_EQ(other.params.second_splitter, "same");
}

TEST(Channel, SmallCutoffOverrideIsRejected) {
  fc::ChannelOptions options;
  options.n_max = 5;
  EXPECT_THROW(channel(2.0, 2, 0.5, options), fc::CutoffError);
}

TEST(Channel, Composability) {
  const Complex alpha(1.2, 0.5);
  const double Mz = 0.4;
  const auto first = channel(alpha, 2, Mz);
  const auto twice = channel(first.amplitude_a_out, 2, Mz);
  const auto once = channel(alpha, 2, 2 * Mz);
  EXPECT_NEAR(std::abs(twice.amplitude_a_out - once.amplitude_a_out), 0.0, 1e-8);
  EXPECT_NEAR(twice.fidelity_b, once.fidelity_b, 1e-8);
  EXPECT_NEAR(twice.mean_b_out, once.mean_b_out, 1e-8);
}

TEST(Channel, MonotoneAttenuation) {
  double previous = 1e9;
  for (int i = 0; i <= 10; ++i) {
    const double Mz = 0.2 * i;
    const double magnitude = std::abs(channel(Complex(0.6, 0.8), 1, Mz).amplitude_a_out);
    EXPECT_LT(magnitude, previous) << Mz;
    previous = magnitude;
  }
}

TEST(Channel, StatesAtEachStage) {
  const Complex alpha(0.7, 0.1);
  const auto absorber = fc::AbsorberParams::from_decay(0.5, kBalanced);
  const auto s = fc::propagate_scheme(alpha, 1, kBalanced, absorber);
  const auto& cut = s.input.cutoff();
  const fc::Matrix a = fc::mode_operator(fc::OperatorLabel::a, cut).matrix;
  const fc::Matrix nb = fc::mode_operator(fc::OperatorLabel::n_b, cut).matrix;
  EXPECT_NEAR(std::abs(fc::expectation(s.input, a) - alpha), 0.0, 1e-12);
  EXPECT_NEAR(fc::expectation(s.input, nb).real(), 1.0, 1e-12);
  // Absorber input is the A-state; output carries q alpha and |1>.
  const auto A = fc::build_A_state(alpha, 1, kBalanced.c(), kBalanced.s(), cut);
  EXPECT_NEAR(std::abs(A.vector().dot(s.absorber_input.vector())), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(fc::expectation(s.output, a) - alpha * absorber.q()), 0.0, 1e-10);
  EXPECT_NEAR(fc::expectation(s.output, nb).real(), 1.0, 1e-10);
}

TEST(Channel, CollectiveJumpIsRotatedLowering) {
  const fc::FockCutoff cut(7);
  const auto scheme = fc::SchemeParams::matched_to(0.6, -0.8);
  const fc::Matrix L = fc::collective_jump(scheme, cut);
  const fc::Matrix ref = (0.6 * oracle::mode_a(7) - 0.8 * oracle::mode_b(7));
  EXPECT_LT((L - ref).cwiseAbs().maxCoeff(), 1e-15);
  // On the safe subspace it is W a W^dag for the first splitter W.
  const fc::Matrix W = oracle::beamsplitter(-scheme.theta(), 7);
  const fc::Matrix conj = W * oracle::mode_a(7) * W.adjoint();
  const fc::Matrix alt = W.adjoint() * oracle::mode_a(7) * W;
  const auto safe = fc::safe_indices(cut);
  EXPECT_LT(std::min(fc::restricted_norm(L - conj, safe), fc::restricted_norm(L - alt, safe)), 1e-12);
}

TEST(Channel, LindbladAgreesWithAnalytic) {
  fc::ChannelOptions options;
  options.n_max = 12;
  const auto analytic = channel(Complex(0.4, 0.3), 1, 0.5, options);
  options.model = fc::AbsorberModel::Lindblad;
  const auto lindblad = channel(Complex(0.4, 0.3), 1, 0.5, options);
  expect_reports_near(analytic, lindblad, 1e-5);
  EXPECT_TRUE(lindblad.meets_contract(fc::model_tolerance(fc::AbsorberModel::Lindblad)));
  EXPECT_EQ(lindblad.params.model, "lindblad");
}

TEST(Raman, FrameEquivalence) {
  const auto absorber = fc::AbsorberParams::from_decay(1.0, kBalanced);
  const auto base = fc::run_channel(1.0, 1, kBalanced, absorber);
  for (int eps : {-1, 1}) {
    const auto freq = fc::FrequencySpec::resonant(1.0, 0.3, eps);
    const auto r = fc::run_raman_variant(1.0, 1, kBalanced, absorber, freq);
    expect_reports_near(base, r, 1e-9);
    EXPECT_EQ(r.params.epsilon, eps);
  }
  const auto zero = fc::run_raman_variant(1.0, 1, kBalanced, absorber, fc::FrequencySpec::resonant(1.0, 0.3, 0));
  EXPECT_EQ(zero.fidelity_b, base.fidelity_b);

  fc::FrequencySpec broken = fc::FrequencySpec::resonant(1.0, 0.3, 1);
  broken.omega_a += 0.1;
  EXPECT_THROW(fc::run_raman_variant(1.0, 1, kBalanced, absorber, broken), fc::ValidationError);
}
