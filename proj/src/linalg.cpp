#include "regime_fx/linalg.hpp"

#include <cmath>
#include <limits>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

template <class M>
M expm_impl(const M& a) {
  if (a.rows() != a.cols()) {
    throw DomainError("expm: matrix must be square");
  }
  const auto n = a.rows();
  const double norm = n == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
  if (!std::isfinite(norm)) {
    throw DomainError("expm: non-finite matrix entries");
  }

  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const M x = a / std::ldexp(1.0, squarings);

  M result = M::Identity(n, n);
  M term = M::Identity(n, n);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int k = 1; k <= 40; ++k) {
    term = (term * x) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 0.25 * eps * result.cwiseAbs().maxCoeff()) {
      break;
    }
  }
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  return result;
}

}  // namespace

Matrix expm(const Matrix& a) { return expm_impl(a); }

ComplexMatrix expm(const ComplexMatrix& a) { return expm_impl(a); }

Vector stationary_distribution(const Matrix& generator) {
  const auto n = generator.rows();
  if (n == 0 || generator.cols() != n) {
    throw InvalidModelError("stationary_distribution: generator must be square and non-empty");
  }
  Matrix system(n + 1, n);
  system.topRows(n) = generator.transpose();
  system.row(n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs(n) = 1.0;

  Vector pi = system.completeOrthogonalDecomposition().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < -1e-9) {
      throw InvalidModelError("stationary_distribution: solution has negative mass");
    }
    pi(i) = std::max(pi(i), 0.0);
  }
  return pi / pi.sum();
}

}  // namespace regime_fx
