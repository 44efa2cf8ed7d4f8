// Copyright 2026 The SGQG Authors
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

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sgqg {

inline constexpr const char* kVersion = "0.1.0";

using cd = std::complex<double>;

// Every operator in this library has dimension 2, 3, 4 or 6. Fixing the
// maximum size keeps all matrices on the stack.
inline constexpr int kMaxDim = 6;
using Operator = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using StateVector = Eigen::Matrix<cd, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using HermitianOperator = Operator;
using UnitaryOperator = Operator;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cd kI{0.0, 1.0};

// Error taxonomy. Every failure raised by the library derives from Error so
// callers can separate physics/numerics failures from programming errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};
struct DegenerateError : Error {
  using Error::Error;
};
struct InputError : Error {
  using Error::Error;
};
struct AccuracyError : Error {
  using Error::Error;
};
struct CyclicityError : Error {
  using Error::Error;
  double defect = 0.0;
};
struct SamplingError : Error {
  using Error::Error;
};
struct CapabilityError : Error {
  using Error::Error;
};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Largest |M - M^dagger| entry.
inline double hermiticity_defect(const Operator& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest |U^dagger U - I| entry.
inline double unitarity_defect(const Operator& u) {
  Operator id = Operator::Identity(u.cols(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff();
}

/// Spectral norm (largest singular value).
inline double operator_norm(const Operator& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Operator> svd(m);
  return svd.singularValues()(0);
}

namespace pauli {
inline Operator identity() { return Operator::Identity(2, 2); }
inline Operator x() {
  Operator m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Operator y() {
  Operator m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline Operator z() {
  Operator m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace sgqg
