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

#include "fockchannel/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace fockchannel {

std::string_view to_string(AbsorberModel model) {
  return model == AbsorberModel::Analytic ? "analytic" : "lindblad";
}

std::string_view to_string(SplitterOrientation orientation) {
  return orientation == SplitterOrientation::Inverse ? "inverse" : "same";
}

double model_tolerance(AbsorberModel model) { return model == AbsorberModel::Analytic ? 1e-6 : 1e-5; }

bool ChannelReport::meets_contract(double tolerance) const {
  const double budget = 10.0 * leakage + tolerance;
  return fidelity_b >= 1.0 - budget && std::abs(amplitude_a_out - expected_amplitude) <= budget;
}

namespace {

RunEcho make_echo(std::string command, Complex alpha, int n, const SchemeParams& scheme,
                  const AbsorberParams& absorber, const ChannelOptions& options, const FockCutoff& cutoff) {
  RunEcho e;
  e.command = std::move(command);
  e.alpha = alpha;
  e.n = n;
  e.g = scheme.g();
  e.f = scheme.f();
  e.theta = scheme.theta();
  e.c = scheme.c();
  e.s = scheme.s();
  e.R = absorber.R();
  e.N_occ = absorber.N_occ();
  e.gamma = absorber.gamma();
  e.z = absorber.z();
  e.v = absorber.v();
  e.M = absorber.M();
  e.q = absorber.q();
  e.model = std::string(to_string(options.model));
  e.second_splitter = std::string(to_string(options.second_splitter));
  e.n_max = cutoff.n_max();
  e.margin = cutoff.margin();
  e.dt = options.dt;
  return e;
}

// U rho U^dag with a sparse U.
Matrix conjugate(const SparseMatrix& U, const Matrix& rho) {
  const SparseMatrix U_adj = U.adjoint();
  Matrix out = U * Matrix(rho * U_adj);
  return 0.5 * (out + out.adjoint());
}

SparseMatrix rotate_frame(const SparseMatrix& op, const Vector& frame) {
  return SparseMatrix(frame.asDiagonal() * op * frame.conjugate().asDiagonal());
}

Matrix unrotate(const Matrix& rho, const Vector& frame) {
  return frame.conjugate().asDiagonal() * rho * frame.asDiagonal();
}

ChannelReport report_from(const SchemeStates& states, Complex alpha, int n, const AbsorberParams& absorber) {
  const FockCutoff& cutoff = states.output.cutoff();
  ChannelReport report;
  report.stats = compute_stats(states.absorber_input);
  report.leakage = std::max(states.absorber_input.leakage(), states.output.leakage());
  const Matrix rho_b = reduced_mode_state(states.output, Mode::B);
  report.fidelity_b = std::clamp(rho_b(n, n).real(), 0.0, 1.0);
  for (int k = 0; k < cutoff.n_max(); ++k) report.mean_b_out += k * rho_b(k, k).real();
  report.amplitude_a_out = expectation(states.output, mode_operator(OperatorLabel::a, cutoff));
  report.expected_amplitude = absorber.q() * alpha;
  return report;
}

}  // namespace

Matrix collective_jump(const SchemeParams& scheme, const FockCutoff& cutoff, double frame_angle) {
  const Matrix a = mode_operator(OperatorLabel::a, cutoff).matrix;
  const Matrix b = mode_operator(OperatorLabel::b, cutoff).matrix;
  return (scheme.g() * a + scheme.f() * std::polar(1.0, frame_angle) * b) / scheme.G();
}

SchemeStates propagate_scheme(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                              const ChannelOptions& options, double frame_angle) {
  if (!scheme.matched())
    throw ValidationError("run_channel: scheme is not matched to the couplings (need s g = -c f)");
  const FockCutoff cutoff = options.n_max ? FockCutoff(*options.n_max, options.margin)
                                          : FockCutoff::for_input(alpha, n, options.margin, options.cutoff_cap);
  const TwoModeState input = build_input_state(alpha, n, cutoff);

  const bool rotated = frame_angle != 0.0;
  const Vector frame = phase_shift_diagonal(Mode::A, frame_angle, cutoff);
  auto in_frame = [&](const SparseMatrix& op) { return rotated ? rotate_frame(op, frame) : op; };

  const SparseMatrix splitter = beamsplitter_sparse(scheme.theta(), cutoff);
  const SparseMatrix first = in_frame(splitter);
  const SparseMatrix second = in_frame(options.second_splitter == SplitterOrientation::Inverse
                                           ? SparseMatrix(splitter.adjoint())
                                           : splitter);
  // W a W^dag = r: the medium damps its collective mode.
  const SparseMatrix collective_frame =
      in_frame(beamsplitter_sparse(std::atan2(-scheme.f(), scheme.g()), cutoff));

  Vector psi = rotated ? Vector(frame.cwiseProduct(input.vector())) : input.vector();
  psi = first * psi;
  const TwoModeState absorber_input = TwoModeState::pure(psi, cutoff);
  const TwoModeState absorber_input_unrotated =
      rotated ? TwoModeState::pure(frame.conjugate().cwiseProduct(psi), cutoff) : absorber_input;
  if (absorber_input.leakage() > options.leakage_threshold)
    throw CutoffError("run_channel: leakage at the absorber input exceeds the threshold");

  TwoModeState absorbed = absorber_input;
  if (options.model == AbsorberModel::Analytic) {
    absorbed = damp_collective_mode(absorber_input, collective_frame, absorber.q(), options.leakage_threshold);
  } else {
    absorbed = lindblad_evolve(absorber_input, collective_jump(scheme, cutoff, frame_angle), absorber.lindblad_rate(), absorber.duration(), options.dt);
  }

  Matrix rho = conjugate(second, absorbed.density());
  TwoModeState absorbed_unrotated =
      rotated ? TwoModeState::mixed_trusted(unrotate(absorbed.density(), frame), cutoff) : absorbed;
  if (rotated) rho = unrotate(rho, frame);
  return SchemeStates{input, absorber_input_unrotated, std::move(absorbed_unrotated),
                      TwoModeState::mixed_trusted(std::move(rho), cutoff)};
}

namespace {

ChannelReport run_scheme(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                         const ChannelOptions& options, double mu, std::string command) {
  const SchemeStates states = propagate_scheme(alpha, n, scheme, absorber, options, mu);
  ChannelReport report = report_from(states, alpha, n, absorber);
  report.params = make_echo(std::move(command), alpha, n, scheme, absorber, options, states.output.cutoff());
  return report;
}

}  // namespace

ChannelReport run_channel(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                          const ChannelOptions& options) {
  return run_scheme(alpha, n, scheme, absorber, options, 0.0, "channel");
}

ChannelReport run_control(int n, const AbsorberParams& absorber, const FockCutoff& cutoff) {
  if (n < 0) throw ValidationError("run_control: n must be >= 0");
  const int nm = cutoff.n_max();
  if (n >= nm - cutoff.margin()) throw CutoffError("run_control: cutoff too small for |n>");
  Matrix rho = Matrix::Zero(nm, nm);
  rho(n, n) = 1.0;
  const Matrix out = damp_single_mode(rho, absorber.q());

  ChannelReport report;
  report.fidelity_b = std::clamp(out(n, n).real(), 0.0, 1.0);
  for (int k = 0; k < nm; ++k) report.mean_b_out += k * out(k, k).real();
  report.amplitude_a_out = 0.0;
  report.expected_amplitude = 0.0;
  report.leakage = 0.0;
  for (int k = nm - cutoff.margin(); k < nm; ++k) report.leakage += out(k, k).real();

  RunEcho& e = report.params;
  e.command = "control";
  e.n = n;
  e.R = absorber.R();
  e.N_occ = absorber.N_occ();
  e.gamma = absorber.gamma();
  e.z = absorber.z();
  e.v = absorber.v();
  e.M = absorber.M();
  e.q = absorber.q();
  e.model = "analytic";
  e.n_max = nm;
  e.margin = cutoff.margin();
  return report;
}

ChannelReport run_raman_variant(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                                const FrequencySpec& freq, const ChannelOptions& options) {
  const EquivalentScheme eq = unitary_equivalent_scheme(scheme, freq);
  ChannelReport report =
      run_scheme(alpha, n, scheme, absorber, options, eq.frame_angle(absorber.duration()), "raman");
  report.params.epsilon = freq.epsilon;
  report.params.Omega = freq.Omega;
  report.params.omega_0 = freq.omega_0;
  report.params.omega_a = freq.omega_a;
  report.params.omega_b = freq.omega_b;
  return report;
}

}  // namespace fockchannel
