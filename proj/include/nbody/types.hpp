#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace nbody {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVecX = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inputs violate a precondition (sizes, signs, subspace membership).
struct InvalidInput : Error {
  using Error::Error;
};

/// A subspace basis failed its orthonormality contract.
struct InvalidSubspace : Error {
  using Error::Error;
};

/// Two bodies closer than the collision threshold.
struct CollisionError : Error {
  using Error::Error;
};

/// An iterative search did not converge within its iteration budget.
struct SearchFailure : Error {
  using Error::Error;
};

/// A stated hypothesis of a property check does not hold on the input;
/// the check is inapplicable rather than failed.
struct HypothesisError : Error {
  using Error::Error;
};

/// Malformed job description (missing or ill-typed fields).
struct ParseError : Error {
  using Error::Error;
};

}  // namespace nbody
