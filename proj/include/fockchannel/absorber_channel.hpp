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

// The absorbing medium in three interchangeable forms:
//  - analytic amplitude damping of the collective mode r (atoms eliminated),
//  - RK4 integration of the field-only Lindblad master equation,
//  - an explicit few-atom interaction-picture model with optional relaxation.

#ifndef FOCKCHANNEL_ABSORBER_CHANNEL_HPP
#define FOCKCHANNEL_ABSORBER_CHANNEL_HPP

#include <functional>
#include <variant>
#include <vector>

#include "fockchannel/fock_core.hpp"
#include "fockchannel/mode_transforms.hpp"

namespace fockchannel {

inline constexpr double kDefaultLeakageThreshold = 1e-10;

/// Medium parameters. M = R c^2 (1 + (f/g)^2) and q = exp(-M z); for a matched
/// scheme M = R.
class AbsorberParams {
 public:
  /// Absorption coefficient R given directly.
  static AbsorberParams from_absorption(double R, double z, const SchemeParams& scheme, double v = 1.0);
  /// R = g^2 N_occ / gamma.
  static AbsorberParams from_medium(double N_occ, double gamma, double z, const SchemeParams& scheme,
                                    double v = 1.0);
  /// Unit length with R chosen so that M z equals `decay_length`.
  static AbsorberParams from_decay(double decay_length, const SchemeParams& scheme, double v = 1.0);

  double R() const { return R_; }
  double N_occ() const { return N_occ_; }
  double gamma() const { return gamma_; }
  double z() const { return z_; }
  double v() const { return v_; }
  double M() const { return M_; }
  double q() const { return q_; }
  double Mz() const { return M_ * z_; }
  /// Propagation time z / v.
  double duration() const { return z_ / v_; }
  /// Field Lindblad rate with kappa * duration = 2 M z.
  double lindblad_rate() const { return 2.0 * M_ * v_; }

 private:
  AbsorberParams(double R, double N_occ, double gamma, double z, double v, const SchemeParams& scheme);

  double R_, N_occ_, gamma_, z_, v_, M_, q_;
};

/// Amplitude damping of a single mode; <a> scales by q, <n> by q^2.
Matrix damp_single_mode(const Matrix& rho, double q);

/// Damps the mode W a W^dag of a two-mode state, where W is a unitary on the
/// two-mode space. Throws CutoffError when the state rotated by W^dag leaks more
/// than `leakage_threshold`.
TwoModeState damp_collective_mode(const TwoModeState& state, const SparseMatrix& W, double q,
                                  double leakage_threshold = kDefaultLeakageThreshold);

/// Damping of r = (g a + f b)/G with transmissivity absorber.q(); tau untouched.
TwoModeState collective_damping(const TwoModeState& state, const SchemeParams& scheme,
                                const AbsorberParams& absorber,
                                double leakage_threshold = kDefaultLeakageThreshold);

// ---------------------------------------------------------------------------
// Master-equation integration

/// Generator d rho/dt = -i[H, rho] + sum_L (L rho L^dag - 1/2 {L^dag L, rho}).
/// Jump operators carry their rates (L = sqrt(rate) * jump).
struct LindbladGenerator {
  SparseMatrix hamiltonian;
  std::vector<SparseMatrix> jumps;

  Index dim() const { return hamiltonian.rows(); }
};

using DensityObserver = std::function<void(double t, const Matrix& rho)>;

struct Rk4Options {
  double dt = 1e-3;
  /// Invoke the observer every this many steps (and at the final time).
  int observe_every = 1;
  bool check_positivity = true;
};

/// Fixed-step RK4. Throws NumericalError if the trace drifts by more than 1e-6
/// or (when enabled) the final state has an eigenvalue below -1e-8.
Matrix integrate_lindblad(Matrix rho, const LindbladGenerator& generator, double duration,
                          const Rk4Options& options, const DensityObserver& observer = {});

/// d rho/dt = kappa (L rho L^dag - 1/2 L^dag L rho - 1/2 rho L^dag L).
TwoModeState lindblad_evolve(const TwoModeState& state, const Matrix& jump, double kappa,
                             double duration, double dt, const DensityObserver& observer = {});

// ---------------------------------------------------------------------------
// Microscopic model: field (x) atoms, joint index = field_index * 2^atoms + atom_bits.

struct MicroModel {
  int atom_count = 1;
  double g = 0.0;
  double f = 0.0;
  double relaxation_rate = 0.0;
  double duration = 0.0;
};

inline constexpr int kMaxAtoms = 3;
inline constexpr int kMaxMicroCutoff = 12;

class JointState {
 public:
  JointState(std::variant<Vector, Matrix> data, const FockCutoff& cutoff, int atom_count);

  bool is_pure() const { return std::holds_alternative<Vector>(data_); }
  const Vector& vector() const { return std::get<Vector>(data_); }
  Matrix density() const;
  const FockCutoff& cutoff() const { return cutoff_; }
  int atom_count() const { return atom_count_; }
  Complex expectation(const Matrix& op) const;

 private:
  std::variant<Vector, Matrix> data_;
  FockCutoff cutoff_;
  int atom_count_;
};

/// Throws DimensionError outside atom_count in [1, 3], n_max <= 12.
void check_micro_budget(int atom_count, const FockCutoff& cutoff);

Index joint_dim(const FockCutoff& cutoff, int atom_count);
/// field_op (x) identity on the atoms.
Matrix joint_field_operator(const Matrix& field_op, int atom_count);
/// Sum over atoms of |1><1|_m, as a joint operator.
Matrix atomic_excitation_operator(const FockCutoff& cutoff, int atom_count);
/// V = i (S_10 (g a + f b) - S_01 (g a + f b)^dag), hbar = 1.
Matrix micro_hamiltonian(const MicroModel& model, const FockCutoff& cutoff);
/// Safe field subspace (total photons <= n_max - 2) times every atomic configuration.
std::vector<Index> joint_safe_indices(const FockCutoff& cutoff, int atom_count);
/// field (x) |0...0>.
JointState with_ground_atoms(const TwoModeState& field, int atom_count);
/// Partial trace over the atoms.
TwoModeState field_marginal(const JointState& joint);

using JointObserver = std::function<void(double t, const JointState& state)>;

struct MicroOptions {
  double dt = 1e-3;
  /// Observation instants on [0, duration] (unitary path) or every
  /// duration / samples of RK4 time (relaxation path).
  int samples = 50;
};

/// Evolves field (x) atomic ground state under V for model.duration. With
/// relaxation_rate > 0 each atom decays via sqrt(rate) |0><1|_m and the RK4
/// integrator is used; otherwise the evolution is exact (eigendecomposition).
JointState microscopic_evolve(const TwoModeState& field, const MicroModel& model,
                              const MicroOptions& options = {}, const JointObserver& observer = {});

}  // namespace fockchannel

#endif  // FOCKCHANNEL_ABSORBER_CHANNEL_HPP
