#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace bspc {

using Real = double;
using Complex = std::complex<double>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXr = DenseMatrix<Real>;
using MatrixXc = DenseMatrix<Complex>;
using VectorXr = DenseVector<Real>;
using VectorXc = DenseVector<Complex>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when input data violates a documented precondition.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when an algorithm fails numerically (non-convergence,
/// singular-to-working-precision systems, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised before attempting an allocation beyond the configured cap.
struct MemoryCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Squared Frobenius norm of any dense expression; complex-safe.
template <typename Derived>
double frobenius_norm_squared(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().squaredNorm();
}

/// Frobenius norm (= Hilbert-Schmidt norm of the discretized operator).
template <typename Derived>
double frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.derived().norm();
}

}  // namespace bspc
