#pragma once

#include <complex>

#include <Eigen/Dense>

namespace regime_fx {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Matrix exponential by scaling and squaring with a truncated Taylor kernel.
/// The argument is scaled so that its infinity norm is at most 1/2 before the
/// series is summed to machine precision.
Matrix expm(const Matrix& a);
ComplexMatrix expm(const ComplexMatrix& a);

/// Probability vector pi with pi * generator = 0 and sum(pi) = 1, taken as the
/// minimum-norm least-squares solution so that reducible chains still get a
/// well-defined answer (the all-zero generator yields the uniform vector).
/// Works equally for a stochastic matrix P when passed P - I.
Vector stationary_distribution(const Matrix& generator);

}  // namespace regime_fx
