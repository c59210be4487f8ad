#include "regime_fx/esscher.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRatioTolerance = 1e-9;

double martingale_gap(const JumpDistribution& dist, double theta) {
  return mgf(dist, theta + 1.0) - mgf(dist, theta);
}

void verify_root(const JumpDistribution& dist, double theta) {
  const double ratio = mgf(dist, theta + 1.0) / mgf(dist, theta);
  if (!(std::abs(ratio - 1.0) <= kRatioTolerance)) {
    throw InconsistencyError("Esscher jump root " + std::to_string(theta) +
                             " fails M(theta+1)/M(theta) = 1 (ratio " + std::to_string(ratio) +
                             ")");
  }
}

// Root of (p t1 - q t2) x^2 + (p t1 + 2 t1 t2 - q t2) x + (p t1 t2^2 + p t2 t1^2 - t2 t1^2 + t1 t2)
// inside the admissible interval; q = 1 - p.
double double_exponential_root(const DoubleExponential& d, double lo, double hi) {
  const double t1 = d.theta1;
  const double t2 = d.theta2;
  const double p = d.p;
  const double a = p * t1 - (1.0 - p) * t2;
  const double b = p * t1 + 2.0 * t1 * t2 - (1.0 - p) * t2;
  const double c = p * t1 * t2 * t2 + p * t2 * t1 * t1 - t2 * t1 * t1 + t1 * t2;

  std::vector<double> roots;
  if (a == 0.0) {
    if (b == 0.0) throw NoSolutionError("degenerate double-exponential martingale equation");
    roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw NoSolutionError("double-exponential martingale equation has no real root");
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    roots.push_back(q / a);
    if (q != 0.0) roots.push_back(c / q);
  }

  std::vector<double> inside;
  for (double r : roots) {
    if (r > lo && r < hi) inside.push_back(r);
  }
  if (inside.empty()) {
    throw NoSolutionError("no double-exponential Esscher root in (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + ")");
  }
  if (inside.size() > 1 && inside[0] != inside[1]) {
    throw InconsistencyError("two double-exponential Esscher roots in the admissible interval");
  }
  return inside.front();
}

struct Bracket {
  double below;  // g < 0
  double above;  // g > 0
};

// g is strictly increasing on the admissible interval, diverging to -inf at
// the left end and +inf at the right end for the built-in laws.
Bracket bracket_root(const JumpDistribution& dist, double lo, double hi) {
  double start;
  if (std::isfinite(lo) && std::isfinite(hi)) {
    start = 0.5 * (lo + hi);
  } else if (std::isfinite(lo)) {
    start = lo + 1.0;
  } else if (std::isfinite(hi)) {
    start = hi - 1.0;
  } else {
    start = 0.0;
  }

  auto probe = [&](double toward, bool left, int k) {
    if (std::isfinite(toward)) return toward + (start - toward) * std::ldexp(1.0, -k);
    return left ? start - std::ldexp(1.0, k) : start + std::ldexp(1.0, k);
  };

  const double g0 = martingale_gap(dist, start);
  if (g0 == 0.0) return {start, start};
  Bracket br{start, start};
  if (g0 < 0.0) {
    for (int k = 1; k <= 60; ++k) {
      const double x = probe(hi, false, k);
      if (!(x < hi)) break;
      const double g = martingale_gap(dist, x);
      if (g >= 0.0) return {br.below, x};
      br.below = x;
    }
  } else {
    for (int k = 1; k <= 60; ++k) {
      const double x = probe(lo, true, k);
      if (!(x > lo)) break;
      const double g = martingale_gap(dist, x);
      if (g <= 0.0) return {x, br.above};
      br.above = x;
    }
  }
  throw NoSolutionError("M(theta+1) - M(theta) has no sign change on the admissible interval");
}

}  // namespace

Vector RiskNeutralModel::martingale_residual() const {
  const Vector s2 = base.sigma.array().square();
  return (base.r_f - base.r_d + base.mu).array() + esscher.theta_c.array() * s2.array() +
         lambda_q.array() * k_q;
}

Vector solve_theta_c(const RegimeParameters& params) {
  if ((params.sigma.array() <= 0.0).any()) {
    throw DomainError("solve_theta_c: zero or negative volatility");
  }
  return (params.r_d - params.r_f - params.mu).array() / params.sigma.array().square();
}

std::pair<double, double> admissible_theta_j_interval(const JumpDistribution& dist) {
  const auto [lo, hi] = dist.mgf_interval();
  return {lo, hi - 1.0};
}

double solve_theta_j_bisection(const JumpDistribution& dist, double tolerance) {
  const auto [lo, hi] = admissible_theta_j_interval(dist);
  if (!(lo < hi)) throw NoSolutionError("admissible interval for the jump tilt is empty");

  auto [below, above] = bracket_root(dist, lo, hi);
  for (int it = 0; it < 400 && above - below > tolerance * std::max(1.0, std::abs(below)); ++it) {
    const double mid = 0.5 * (below + above);
    if (mid <= below || mid >= above) break;
    const double g = martingale_gap(dist, mid);
    if (g == 0.0) return mid;
    (g < 0.0 ? below : above) = mid;
  }
  return 0.5 * (below + above);
}

double solve_theta_j(const JumpDistribution& dist) {
  const auto [lo, hi] = admissible_theta_j_interval(dist);
  if (!(lo < hi)) throw NoSolutionError("admissible interval for the jump tilt is empty");

  double theta;
  if (const auto* d = dist.get_if<DoubleExponential>()) {
    theta = double_exponential_root(*d, lo, hi);
  } else if (const auto* n = dist.get_if<NormalJump>()) {
    const double v = n->stddev * n->stddev;
    theta = -(n->mean + 0.5 * v) / v;
  } else {
    theta = solve_theta_j_bisection(dist, 1e-12);
  }
  verify_root(dist, theta);
  return theta;
}

Vector risk_neutral_intensity(const Vector& lambda_p, const JumpDistribution& dist,
                              double theta_j) {
  return lambda_p * mgf(dist, theta_j);
}

JumpDistribution transform_jump_law(const JumpDistribution& dist, double theta_j) {
  if (!dist.mgf_finite(theta_j)) {
    throw DivergenceError("transform_jump_law: tilt " + std::to_string(theta_j) +
                          " outside the finite-MGF interval");
  }
  if (theta_j == 0.0) return dist;

  if (const auto* d = dist.get_if<DoubleExponential>()) {
    if (!(d->theta1 > 1.0)) {
      throw DivergenceError("double-exponential law needs theta1 > 1 for a finite E[e^Z]");
    }
    const double ratio = mgf(dist, theta_j + 1.0) / mgf(dist, theta_j);
    const double left = d->theta2 / (d->theta2 + 1.0);
    const double right = d->theta1 / (d->theta1 - 1.0);
    double p = (ratio - left) / (right - left);
    if (p < -1e-12 || p > 1.0 + 1e-12 || !std::isfinite(p)) {
      throw InconsistencyError("transformed double-exponential weight " + std::to_string(p) +
                               " lies outside [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    return JumpDistribution::double_exponential(d->theta1, d->theta2, p);
  }

  if (const auto* n = dist.get_if<NormalJump>()) {
    return JumpDistribution::normal(n->mean + theta_j * n->stddev * n->stddev, n->stddev);
  }

  const auto base = std::make_shared<const CustomJump>(*dist.get_if<CustomJump>());
  const double log_norm = std::log(mgf(dist, theta_j));
  auto log_base = [base](double x) {
    if (base->log_density) return base->log_density(x);
    const double v = base->density(x);
    return v > 0.0 ? std::log(v) : -kInf;
  };

  CustomJump tilted;
  tilted.log_density = [=](double x) {
    const double ld = log_base(x);
    return ld == -kInf ? -kInf : theta_j * x + ld - log_norm;
  };
  tilted.density = [ld = tilted.log_density](double x) {
    const double v = ld(x);
    return v == -kInf ? 0.0 : std::exp(v);
  };
  if (base->mgf) {
    const double norm = std::exp(log_norm);
    tilted.mgf = [base, theta_j, norm](double s) { return base->mgf(theta_j + s) / norm; };
  }
  tilted.theta_lo = base->theta_lo - theta_j;
  tilted.theta_hi = base->theta_hi - theta_j;
  tilted.support_lo = base->support_lo;
  tilted.support_hi = base->support_hi;
  tilted.breakpoints = base->breakpoints;
  return JumpDistribution::custom(std::move(tilted));
}

double mean_jump_size(const JumpDistribution& dist_q) { return mgf(dist_q, 1.0) - 1.0; }

RiskNeutralModel assemble_risk_neutral_model(const RegimeParameters& params,
                                             const MarkovRegimeModel& chain,
                                             const JumpDistribution& dist,
                                             const EsscherParameters& esscher) {
  params.validate(chain.n_states());
  if (esscher.theta_c.size() != static_cast<Eigen::Index>(chain.n_states())) {
    throw InvalidModelError("theta_c must have one entry per state");
  }
  JumpDistribution jump_q = transform_jump_law(dist, esscher.theta_j);
  const double k_q = mean_jump_size(jump_q);
  return RiskNeutralModel{
      params,
      chain,
      dist,
      esscher,
      risk_neutral_intensity(params.lambda, dist, esscher.theta_j),
      std::move(jump_q),
      k_q,
  };
}

RiskNeutralModel build_risk_neutral_model(const RegimeParameters& params,
                                          const MarkovRegimeModel& chain,
                                          const JumpDistribution& dist) {
  params.validate(chain.n_states());
  const EsscherParameters esscher{solve_theta_c(params), solve_theta_j(dist)};
  RiskNeutralModel model = assemble_risk_neutral_model(params, chain, dist, esscher);
  if (!(std::abs(model.k_q) <= 1e-9)) {
    throw InconsistencyError("risk-neutral mean jump size is " + std::to_string(model.k_q) +
                             ", expected 0");
  }
  const Vector residual = model.martingale_residual();
  for (Eigen::Index i = 0; i < residual.size(); ++i) {
    if (!(std::abs(residual(i)) <= 1e-10)) {
      throw InconsistencyError("martingale residual " + std::to_string(residual(i)) +
                               " in state " + std::to_string(i));
    }
  }
  return model;
}

}  // namespace regime_fx
