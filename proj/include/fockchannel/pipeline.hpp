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

// End-to-end schemes. The protected channel is
//   |alpha>_a |n>_b --U(theta)--> absorber on r --U(theta)^dag--> |q alpha>_a |n>_b
// for a splitter matched to the medium couplings.

#ifndef FOCKCHANNEL_PIPELINE_HPP
#define FOCKCHANNEL_PIPELINE_HPP

#include <optional>
#include <string>
#include <string_view>

#include "fockchannel/absorber_channel.hpp"
#include "fockchannel/mode_transforms.hpp"
#include "fockchannel/photon_stats.hpp"

namespace fockchannel {

enum class AbsorberModel { Analytic, Lindblad };
enum class SplitterOrientation { Inverse, Same };

std::string_view to_string(AbsorberModel model);
std::string_view to_string(SplitterOrientation orientation);

struct ChannelOptions {
  AbsorberModel model = AbsorberModel::Analytic;
  /// RK4 time step for the Lindblad model (propagation time is z / v).
  double dt = 1e-2;
  std::optional<int> n_max;
  int margin = kDefaultMargin;
  int cutoff_cap = kDefaultCutoffCap;
  double leakage_threshold = kDefaultLeakageThreshold;
  /// Inverse is the protected configuration; Same is kept for exploration.
  SplitterOrientation second_splitter = SplitterOrientation::Inverse;
};

/// Tolerance added to the leakage budget when judging a report.
double model_tolerance(AbsorberModel model);

/// Everything needed to reproduce a run.
struct RunEcho {
  std::string command;
  Complex alpha;
  int n = 0;
  double g = 0, f = 0, theta = 0, c = 0, s = 0;
  double R = 0, N_occ = 0, gamma = 0, z = 0, v = 0, M = 0, q = 1;
  std::string model;
  std::string second_splitter;
  int n_max = 0;
  int margin = 0;
  double dt = 0;
  int epsilon = 0;
  double Omega = 0, omega_0 = 0, omega_a = 0, omega_b = 0;
};

struct ChannelReport {
  /// <n| rho_b |n>; squared-overlap fidelity of output mode b with the input Fock state.
  double fidelity_b = 0.0;
  Complex amplitude_a_out;
  Complex expected_amplitude;
  double mean_b_out = 0.0;
  double leakage = 0.0;
  StatsReport stats;
  RunEcho params;

  /// fidelity_b >= 1 - 10 leakage - tol and |amplitude_a_out - expected| <= 10 leakage + tol.
  bool meets_contract(double tolerance) const;
};

/// States at each stage of the scheme, all expressed in the unrotated frame.
struct SchemeStates {
  TwoModeState input;
  TwoModeState absorber_input;
  TwoModeState absorber_output;
  TwoModeState output;
};

/// Jump operator of the medium, W a W^dag = (g a + f e^{i mu} b) / G, for the
/// matched splitter W conjugated by R_a(mu).
Matrix collective_jump(const SchemeParams& scheme, const FockCutoff& cutoff, double frame_angle = 0.0);

/// Propagates |alpha> (x) |n> through the scheme, optionally conjugated by the
/// frame rotation R_a(frame_angle).
SchemeStates propagate_scheme(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                              const ChannelOptions& options = {}, double frame_angle = 0.0);

/// Throws ValidationError for an unmatched scheme and CutoffError when the
/// state leaks past `options.leakage_threshold`.
ChannelReport run_channel(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                          const ChannelOptions& options = {});

/// |n> alone through amplitude damping with transmissivity q.
ChannelReport run_control(int n, const AbsorberParams& absorber, const FockCutoff& cutoff);

/// The scheme conjugated by R_a(mu), mu = -eps Omega z / v, reported back in
/// the rotating frame.
ChannelReport run_raman_variant(Complex alpha, int n, const SchemeParams& scheme, const AbsorberParams& absorber,
                                const FrequencySpec& freq, const ChannelOptions& options = {});

}  // namespace fockchannel

#endif  // FOCKCHANNEL_PIPELINE_HPP
