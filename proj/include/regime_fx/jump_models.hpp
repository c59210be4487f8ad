#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "regime_fx/markov_regime.hpp"

namespace regime_fx {

/// Two-sided exponential law for the log jump Z:
///   nu(x) = p theta1 e^{-theta1 x} 1{x >= 0} + (1 - p) theta2 e^{theta2 x} 1{x < 0}.
struct DoubleExponential {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double p = 0.0;
};

struct NormalJump {
  double mean = 0.0;
  double stddev = 0.0;
};

/// User-supplied law.  Only `density` is mandatory.  When `log_density` is
/// given it is used inside MGF integrals, which keeps e^{theta x} nu(x)
/// accurate where nu itself underflows.  When `mgf` is given it replaces
/// quadrature entirely.
struct CustomJump {
  std::function<double(double)> density;
  std::function<double(double)> log_density;
  std::function<double(double)> mgf;
  // Open interval on which the MGF is finite; must contain 0.
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  // Points where the density is not smooth or concentrates mass.
  std::vector<double> breakpoints;
};

enum class JumpKind { double_exponential, normal, custom };

class JumpDistribution {
 public:
  using Law = std::variant<DoubleExponential, NormalJump, CustomJump>;

  static JumpDistribution double_exponential(double theta1, double theta2, double p);
  static JumpDistribution normal(double mean, double stddev);
  /// Checks numerically that the density integrates to one within 1e-6.
  static JumpDistribution custom(CustomJump law);

  JumpKind kind() const { return static_cast<JumpKind>(law_.index()); }
  const Law& law() const { return law_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&law_);
  }

  /// Open interval on which E[e^{theta Z}] is finite.
  std::pair<double, double> mgf_interval() const;
  bool mgf_finite(double theta) const;

 private:
  explicit JumpDistribution(Law law) : law_(std::move(law)) {}
  Law law_;
};

struct JumpMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// E[e^{theta Z}].  Throws DivergenceError outside the finite-MGF interval.
double mgf(const JumpDistribution& dist, double theta);

JumpMoments moments(const JumpDistribution& dist);

/// Density of Z; the right branch of the double-exponential owns x = 0.
double density_at(const JumpDistribution& dist, double x);

/// Draws Z.  Built-in laws are sampled exactly; custom laws through an
/// inverse CDF tabulated on cells whose masses come from quadrature.
class JumpSampler {
 public:
  explicit JumpSampler(const JumpDistribution& dist);
  double operator()(Rng& rng) const;

 private:
  struct Table {
    std::vector<double> edges;
    std::vector<double> cumulative;
  };
  JumpDistribution::Law law_;
  std::shared_ptr<const Table> table_;
};

}  // namespace regime_fx
