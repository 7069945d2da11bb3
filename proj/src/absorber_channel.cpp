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

#include "fockchannel/absorber_channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

namespace fockchannel {

namespace {

// Kraus amplitudes of amplitude damping: K_m |l> = w(l, m) |l - m>,
// w(l, m) = sqrt(C(l, m)) q^(l-m) (1 - q^2)^(m/2).
class DampingWeights {
 public:
  DampingWeights(int n_max, double q) : n_(n_max), w_(n_max * n_max, 0.0) {
    std::vector<double> pascal(n_max * n_max, 0.0);
    for (int l = 0; l < n_max; ++l) {
      pascal[l * n_max] = 1.0;
      for (int m = 1; m <= l; ++m)
        pascal[l * n_max + m] = pascal[(l - 1) * n_max + m - 1] + (m <= l - 1 ? pascal[(l - 1) * n_max + m] : 0.0);
    }
    const double loss = 1.0 - q * q;
    for (int l = 0; l < n_max; ++l)
      for (int m = 0; m <= l; ++m)
        w_[l * n_max + m] = std::sqrt(pascal[l * n_max + m]) * std::pow(q, l - m) * std::pow(loss, 0.5 * m);
  }

  double operator()(int l, int m) const { return w_[l * n_ + m]; }

 private:
  int n_;
  std::vector<double> w_;
};

void check_transmissivity(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("damping: transmissivity q must lie in [0, 1]");
}

double rotated_leakage_pure(const Vector& psi, const FockCutoff& cutoff) {
  double total = 0.0;
  for (int j = 0; j < cutoff.n_max(); ++j)
    for (int k = 0; k < cutoff.n_max(); ++k)
      if (cutoff.in_leakage_band(j) || cutoff.in_leakage_band(k)) total += std::norm(psi(cutoff.index(j, k)));
  return total;
}

double rotated_leakage_mixed(const Matrix& rho, const FockCutoff& cutoff) {
  double total = 0.0;
  for (int j = 0; j < cutoff.n_max(); ++j)
    for (int k = 0; k < cutoff.n_max(); ++k)
      if (cutoff.in_leakage_band(j) || cutoff.in_leakage_band(k)) total += rho(cutoff.index(j, k), cutoff.index(j, k)).real();
  return total;
}

void check_leakage(double leakage, double threshold) {
  if (leakage > threshold) {
    std::ostringstream msg;
    msg << "collective damping: leakage " << leakage << " after rotation exceeds threshold " << threshold;
    throw CutoffError(msg.str());
  }
}

// Amplitude damping of mode a on a two-mode density matrix, blockwise in b.
Matrix damp_mode_a(const Matrix& rho, int n_max, double q) {
  const DampingWeights w(n_max, q);
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (int j = 0; j < n_max; ++j) {
    for (int jp = 0; jp < n_max; ++jp) {
      auto block = out.block(static_cast<Index>(j) * n_max, static_cast<Index>(jp) * n_max, n_max, n_max);
      for (int m = 0; j + m < n_max && jp + m < n_max; ++m) {
        const double coeff = w(j + m, m) * w(jp + m, m);
        if (coeff == 0.0) continue;
        block += coeff * rho.block(static_cast<Index>(j + m) * n_max, static_cast<Index>(jp + m) * n_max, n_max, n_max);
      }
    }
  }
  return out;
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------------------
// AbsorberParams

AbsorberParams::AbsorberParams(double R, double N_occ, double gamma, double z, double v,
                               const SchemeParams& scheme)
    : R_(R), N_occ_(N_occ), gamma_(gamma), z_(z), v_(v) {
  if (!(R >= 0.0)) throw ValidationError("absorber: R must be >= 0");
  if (!(N_occ >= 0.0)) throw ValidationError("absorber: N_occ must be >= 0");
  if (!(gamma > 0.0)) throw ValidationError("absorber: gamma must be > 0");
  if (!(z >= 0.0)) throw ValidationError("absorber: z must be >= 0");
  if (!(v > 0.0)) throw ValidationError("absorber: v must be > 0");
  if (scheme.g() == 0.0) throw ValidationError("absorber: decay M = R c^2 (1 + (f/g)^2) needs g != 0");
  const double ratio = scheme.f() / scheme.g();
  M_ = R * scheme.c() * scheme.c() * (1.0 + ratio * ratio);
  q_ = std::exp(-M_ * z);
}

AbsorberParams AbsorberParams::from_absorption(double R, double z, const SchemeParams& scheme, double v) {
  const double g2 = scheme.g() * scheme.g();
  // N_occ / gamma is fixed by R = g^2 N / gamma; report gamma = 1.
  return AbsorberParams(R, g2 > 0.0 ? R / g2 : 0.0, 1.0, z, v, scheme);
}

AbsorberParams AbsorberParams::from_medium(double N_occ, double gamma, double z, const SchemeParams& scheme,
                                           double v) {
  if (!(gamma > 0.0)) throw ValidationError("absorber: gamma must be > 0");
  return AbsorberParams(scheme.g() * scheme.g() * N_occ / gamma, N_occ, gamma, z, v, scheme);
}

AbsorberParams AbsorberParams::from_decay(double decay_length, const SchemeParams& scheme, double v) {
  if (!(decay_length >= 0.0)) throw ValidationError("absorber: Mz must be >= 0");
  if (scheme.g() == 0.0) throw ValidationError("absorber: decay M = R c^2 (1 + (f/g)^2) needs g != 0");
  const double ratio = scheme.f() / scheme.g();
  const double scale = scheme.c() * scheme.c() * (1.0 + ratio * ratio);
  if (!(scale > 0.0)) throw ValidationError("absorber: c = 0 leaves no absorbed component");
  return from_absorption(decay_length / scale, 1.0, scheme, v);
}

// ---------------------------------------------------------------------------
// Analytic channel

Matrix damp_single_mode(const Matrix& rho, double q) {
  check_transmissivity(q);
  if (rho.rows() != rho.cols()) throw DimensionError("damp_single_mode: density must be square");
  const int n = static_cast<int>(rho.rows());
  const DampingWeights w(n, q);
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; i + m < n && j + m < n; ++m) out(i, j) += w(i + m, m) * w(j + m, m) * rho(i + m, j + m);
  return out;
}

TwoModeState damp_collective_mode(const TwoModeState& state, const SparseMatrix& W, double q,
                                  double leakage_threshold) {
  check_transmissivity(q);
  const FockCutoff& cutoff = state.cutoff();
  const int n = cutoff.n_max();
  if (W.rows() != state.dim() || W.cols() != state.dim())
    throw DimensionError("damp_collective_mode: frame unitary size mismatch");

  if (state.is_pure()) {
    const Vector rotated = W.adjoint() * state.vector();
    check_leakage(rotated_leakage_pure(rotated, cutoff), leakage_threshold);
    if (q == 1.0) return state;
    // Kraus branches K_m psi, rotated back; rho = sum_m |phi_m><phi_m|.
    const DampingWeights w(n, q);
    Matrix branches = Matrix::Zero(state.dim(), n);
    for (int m = 0; m < n; ++m) {
      Vector branch = Vector::Zero(state.dim());
      for (int j = 0; j + m < n; ++j)
        branch.segment(static_cast<Index>(j) * n, n) =
            w(j + m, m) * rotated.segment(static_cast<Index>(j + m) * n, n);
      branches.col(m) = W * branch;
    }
    return TwoModeState::mixed_trusted(hermitian_part(branches * branches.adjoint()), cutoff);
  }

  const SparseMatrix W_adj = W.adjoint();
  Matrix rotated = W_adj * Matrix(state.matrix() * W);
  check_leakage(rotated_leakage_mixed(rotated, cutoff), leakage_threshold);
  if (q == 1.0) return state;
  const Matrix damped = damp_mode_a(rotated, n, q);
  return TwoModeState::mixed_trusted(hermitian_part(W * Matrix(damped * W_adj)), cutoff);
}

TwoModeState collective_damping(const TwoModeState& state, const SchemeParams& scheme,
                                const AbsorberParams& absorber, double leakage_threshold) {
  // The matched angle for (g, f) maps a onto r regardless of the scheme's own angle.
  const double frame_angle = std::atan2(-scheme.f(), scheme.g());
  return damp_collective_mode(state, beamsplitter_sparse(frame_angle, state.cutoff()), absorber.q(),
                              leakage_threshold);
}

// ---------------------------------------------------------------------------
// Master equation

namespace {

class LindbladRhs {
 public:
  explicit LindbladRhs(const LindbladGenerator& gen) {
    const Index d = gen.dim();
    SparseMatrix decay(d, d);
    for (const auto& L : gen.jumps) {
      SparseMatrix L_adj = L.adjoint();
      decay += L_adj * L;
      jumps_.push_back(L);
      jump_adj_.push_back(std::move(L_adj));
    }
    // rho A + A^dag rho = 1/2 {K, rho} + i [H, rho] with A = K/2 - iH.
    drift_ = 0.5 * decay - kI * gen.hamiltonian;
    drift_.prune(Complex(0.0));
    drift_adj_ = drift_.adjoint();
  }

  // Only sparse-dense products: L rho L^dag = L (rho L^dag).
  void operator()(const Matrix& rho, Matrix& out) const {
    out.noalias() = -(rho * drift_);
    out.noalias() -= drift_adj_ * rho;
    for (std::size_t i = 0; i < jumps_.size(); ++i) {
      scratch_.noalias() = rho * jump_adj_[i];
      out.noalias() += jumps_[i] * scratch_;
    }
  }

 private:
  SparseMatrix drift_, drift_adj_;
  std::vector<SparseMatrix> jumps_, jump_adj_;
  mutable Matrix scratch_;
};

}  // namespace

Matrix integrate_lindblad(Matrix rho, const LindbladGenerator& generator, double duration,
                          const Rk4Options& options, const DensityObserver& observer) {
  if (!(options.dt > 0.0)) throw ValidationError("lindblad: dt must be > 0");
  if (!(duration >= 0.0)) throw ValidationError("lindblad: duration must be >= 0");
  if (rho.rows() != generator.dim()) throw DimensionError("lindblad: state and generator sizes differ");

  const LindbladRhs rhs(generator);
  const long steps = duration == 0.0 ? 0 : static_cast<long>(std::ceil(duration / options.dt - 1e-9));
  const double h = steps == 0 ? 0.0 : duration / static_cast<double>(steps);
  const Complex trace0 = rho.trace();
  const int every = std::max(1, options.observe_every);

  if (observer) observer(0.0, rho);
  Matrix k1, k2, k3, k4, probe;
  for (long step = 1; step <= steps; ++step) {
    rhs(rho, k1);
    probe = rho + (0.5 * h) * k1;
    rhs(probe, k2);
    probe = rho + (0.5 * h) * k2;
    rhs(probe, k3);
    probe = rho + h * k3;
    rhs(probe, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = hermitian_part(rho);

    const double drift = std::abs(rho.trace() - trace0);
    if (drift > 1e-6) {
      std::ostringstream msg;
      msg << "lindblad: trace drift " << drift << " at step " << step << " (dt = " << h
          << "); step size is unstable";
      throw NumericalError(msg.str());
    }
    if (observer && (step % every == 0 || step == steps)) observer(step * h, rho);
  }
  if (options.check_positivity && steps > 0) {
    const double lowest = min_eigenvalue(rho);
    if (lowest < -1e-8) {
      std::ostringstream msg;
      msg << "lindblad: positivity lost (min eigenvalue " << lowest << ")";
      throw NumericalError(msg.str());
    }
  }
  return rho;
}

TwoModeState lindblad_evolve(const TwoModeState& state, const Matrix& jump, double kappa, double duration,
                             double dt, const DensityObserver& observer) {
  if (!(kappa >= 0.0)) throw ValidationError("lindblad: kappa must be >= 0");
  if (!(dt > 0.0)) throw ValidationError("lindblad: dt must be > 0");
  if (!(duration >= 0.0)) throw ValidationError("lindblad: duration must be >= 0");
  if (jump.rows() != state.dim() || jump.cols() != state.dim())
    throw DimensionError("lindblad: jump operator size mismatch");
  if (kappa == 0.0 || duration == 0.0) return state;

  LindbladGenerator gen;
  gen.hamiltonian = SparseMatrix(state.dim(), state.dim());
  // Drop rounding fill-in so the jump keeps the sparsity of a ladder operator.
  const double scale = jump.cwiseAbs().maxCoeff();
  gen.jumps.push_back(SparseMatrix((std::sqrt(kappa) * jump).sparseView(scale, 1e-14)));
  Rk4Options options;
  options.dt = dt;
  Matrix rho = integrate_lindblad(state.density(), gen, duration, options, observer);
  return TwoModeState::mixed_trusted(std::move(rho), state.cutoff());
}

// ---------------------------------------------------------------------------
// Microscopic model

JointState::JointState(std::variant<Vector, Matrix> data, const FockCutoff& cutoff, int atom_count)
    : data_(std::move(data)), cutoff_(cutoff), atom_count_(atom_count) {}

Matrix JointState::density() const {
  if (is_pure()) return vector() * vector().adjoint();
  return std::get<Matrix>(data_);
}

Complex JointState::expectation(const Matrix& op) const {
  if (is_pure()) return vector().dot(op * vector());
  return std::get<Matrix>(data_).cwiseProduct(op.transpose()).sum();
}

void check_micro_budget(int atom_count, const FockCutoff& cutoff) {
  if (atom_count < 1 || atom_count > kMaxAtoms)
    throw DimensionError("microscopic model: atom_count must be 1, 2 or 3");
  if (cutoff.n_max() > kMaxMicroCutoff)
    throw DimensionError("microscopic model: dimension budget exceeded (n_max <= 12)");
}

Index joint_dim(const FockCutoff& cutoff, int atom_count) { return cutoff.dim() << atom_count; }

Matrix joint_field_operator(const Matrix& field_op, int atom_count) {
  return kron(field_op, Matrix(Matrix::Identity(Index{1} << atom_count, Index{1} << atom_count)));
}

namespace {

// Collective raising operator sum_m |1><0|_m on the atomic register.
Matrix atomic_raising(int atom_count) {
  const Index d = Index{1} << atom_count;
  Matrix s10 = Matrix::Zero(d, d);
  for (Index bits = 0; bits < d; ++bits)
    for (int m = 0; m < atom_count; ++m)
      if (!(bits & (Index{1} << m))) s10(bits | (Index{1} << m), bits) += 1.0;
  return s10;
}

Matrix atomic_lowering(int atom_count, int atom) {
  const Index d = Index{1} << atom_count;
  Matrix s01 = Matrix::Zero(d, d);
  for (Index bits = 0; bits < d; ++bits)
    if (bits & (Index{1} << atom)) s01(bits & ~(Index{1} << atom), bits) = 1.0;
  return s01;
}

}  // namespace

Matrix atomic_excitation_operator(const FockCutoff& cutoff, int atom_count) {
  const Index d = Index{1} << atom_count;
  Matrix count = Matrix::Zero(d, d);
  for (Index bits = 0; bits < d; ++bits)
    for (int m = 0; m < atom_count; ++m)
      if (bits & (Index{1} << m)) count(bits, bits) += 1.0;
  return kron(Matrix(Matrix::Identity(cutoff.dim(), cutoff.dim())), count);
}

Matrix micro_hamiltonian(const MicroModel& model, const FockCutoff& cutoff) {
  check_micro_budget(model.atom_count, cutoff);
  const Matrix field = model.g * mode_operator(OperatorLabel::a, cutoff).matrix +
                       model.f * mode_operator(OperatorLabel::b, cutoff).matrix;
  const Matrix s10 = atomic_raising(model.atom_count);
  const Matrix V = kI * (kron(field, s10) - kron(Matrix(field.adjoint()), Matrix(s10.adjoint())));
  return hermitian_part(V);
}

std::vector<Index> joint_safe_indices(const FockCutoff& cutoff, int atom_count) {
  std::vector<Index> out;
  const Index d = Index{1} << atom_count;
  for (Index field : safe_indices(cutoff))
    for (Index bits = 0; bits < d; ++bits) out.push_back(field * d + bits);
  return out;
}

JointState with_ground_atoms(const TwoModeState& field, int atom_count) {
  const Index d = Index{1} << atom_count;
  if (field.is_pure()) {
    Vector ground = Vector::Zero(d);
    ground(0) = 1.0;
    return JointState(Vector(kron(field.vector(), ground)), field.cutoff(), atom_count);
  }
  Matrix ground = Matrix::Zero(d, d);
  ground(0, 0) = 1.0;
  return JointState(kron(field.matrix(), ground), field.cutoff(), atom_count);
}

TwoModeState field_marginal(const JointState& joint) {
  const Index d = Index{1} << joint.atom_count();
  const Index field_dim = joint.cutoff().dim();
  if (joint.is_pure()) {
    Matrix psi(field_dim, d);
    for (Index x = 0; x < field_dim; ++x)
      for (Index s = 0; s < d; ++s) psi(x, s) = joint.vector()(x * d + s);
    return TwoModeState::mixed_trusted(hermitian_part(psi * psi.adjoint()), joint.cutoff());
  }
  const Matrix rho = joint.density();
  Matrix out = Matrix::Zero(field_dim, field_dim);
  for (Index s = 0; s < d; ++s)
    out += rho(Eigen::seqN(s, field_dim, d), Eigen::seqN(s, field_dim, d));
  return TwoModeState::mixed_trusted(hermitian_part(out), joint.cutoff());
}

JointState microscopic_evolve(const TwoModeState& field, const MicroModel& model, const MicroOptions& options,
                              const JointObserver& observer) {
  check_micro_budget(model.atom_count, field.cutoff());
  if (!(model.duration >= 0.0)) throw ValidationError("microscopic model: duration must be >= 0");
  if (!(model.relaxation_rate >= 0.0)) throw ValidationError("microscopic model: relaxation rate must be >= 0");
  const int samples = std::max(1, options.samples);
  const Matrix H = micro_hamiltonian(model, field.cutoff());
  JointState initial = with_ground_atoms(field, model.atom_count);

  if (model.relaxation_rate == 0.0 && initial.is_pure()) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    const Matrix& V = eig.eigenvectors();
    const Vector coeffs = V.adjoint() * initial.vector();
    auto at = [&](double t) {
      const Vector phases = (-kI * t * eig.eigenvalues().cast<Complex>()).array().exp();
      return JointState(Vector(V * phases.cwiseProduct(coeffs)), field.cutoff(), model.atom_count);
    };
    if (observer)
      for (int i = 0; i <= samples; ++i) {
        const double t = model.duration * i / samples;
        observer(t, at(t));
      }
    return at(model.duration);
  }

  LindbladGenerator gen;
  gen.hamiltonian = H.sparseView();
  const Matrix field_id = Matrix::Identity(field.cutoff().dim(), field.cutoff().dim());
  if (model.relaxation_rate > 0.0)
    for (int m = 0; m < model.atom_count; ++m)
      gen.jumps.push_back(SparseMatrix(
          (std::sqrt(model.relaxation_rate) * kron(field_id, atomic_lowering(model.atom_count, m))).sparseView()));
  Rk4Options rk;
  rk.dt = options.dt;
  const long steps = static_cast<long>(std::ceil(model.duration / options.dt - 1e-9));
  rk.observe_every = static_cast<int>(std::max(1L, steps / samples));
  DensityObserver density_observer;
  if (observer)
    density_observer = [&](double t, const Matrix& rho) { observer(t, JointState(rho, field.cutoff(), model.atom_count)); };
  Matrix rho = integrate_lindblad(initial.density(), gen, model.duration, rk, density_observer);
  return JointState(std::move(rho), field.cutoff(), model.atom_count);
}

}  // namespace fockchannel
