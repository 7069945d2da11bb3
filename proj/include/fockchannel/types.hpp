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

#ifndef FOCKCHANNEL_TYPES_HPP
#define FOCKCHANNEL_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fockchannel {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using MatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using SparseT = Eigen::SparseMatrix<std::complex<Real>>;

using Complex = ComplexT<double>;
using Matrix = MatrixT<double>;
using Vector = VectorT<double>;
using SparseMatrix = SparseT<double>;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates an invariant of its owning type.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands have incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The Fock cutoff cannot hold the requested state to the required accuracy.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract failed (integrator drift, positivity loss, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockchannel

#endif  // FOCKCHANNEL_TYPES_HPP
