#include "regime_fx/jump_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "quadrature.hpp"
#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double custom_integral(const CustomJump& law, const std::function<double(double)>& weighted) {
  return detail::integrate(weighted, law.support_lo, law.support_hi, law.breakpoints);
}

// log nu(x), falling back to the plain density.
double custom_log_density(const CustomJump& law, double x) {
  if (law.log_density) return law.log_density(x);
  const double d = law.density(x);
  return d > 0.0 ? std::log(d) : -kInf;
}

double custom_mgf(const CustomJump& law, double theta) {
  if (law.mgf) return law.mgf(theta);
  if (theta == 0.0) {
    return custom_integral(law, [&](double x) { return law.density(x); });
  }
  return custom_integral(law, [&](double x) {
    const double ld = custom_log_density(law, x);
    return ld == -kInf ? 0.0 : std::exp(theta * x + ld);
  });
}

}  // namespace

JumpDistribution JumpDistribution::double_exponential(double theta1, double theta2, double p) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0) || !std::isfinite(theta1) || !std::isfinite(theta2)) {
    throw InvalidModelError("double-exponential rates must be positive and finite");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidModelError("double-exponential p must lie in [0, 1]");
  }
  return JumpDistribution(DoubleExponential{theta1, theta2, p});
}

JumpDistribution JumpDistribution::normal(double mean, double stddev) {
  if (!std::isfinite(mean) || !(stddev > 0.0) || !std::isfinite(stddev)) {
    throw InvalidModelError("normal jump law needs a finite mean and positive deviation");
  }
  return JumpDistribution(NormalJump{mean, stddev});
}

JumpDistribution JumpDistribution::custom(CustomJump law) {
  if (!law.density) {
    throw InvalidModelError("custom jump law needs a density callback");
  }
  if (!(law.theta_lo < 0.0 && 0.0 < law.theta_hi)) {
    throw InvalidModelError("custom finite-MGF interval must contain 0");
  }
  if (!(law.support_lo < law.support_hi)) {
    throw InvalidModelError("custom support is empty");
  }
  const double mass = custom_integral(law, [&](double x) { return law.density(x); });
  if (std::abs(mass - 1.0) > 1e-6) {
    throw InvalidModelError("custom density integrates to " + std::to_string(mass) +
                            ", expected 1");
  }
  return JumpDistribution(std::move(law));
}

std::pair<double, double> JumpDistribution::mgf_interval() const {
  return std::visit(overloaded{
                        [](const DoubleExponential& d) { return std::pair{-d.theta2, d.theta1}; },
                        [](const NormalJump&) { return std::pair{-kInf, kInf}; },
                        [](const CustomJump& c) { return std::pair{c.theta_lo, c.theta_hi}; },
                    },
                    law_);
}

bool JumpDistribution::mgf_finite(double theta) const {
  const auto [lo, hi] = mgf_interval();
  return std::isfinite(theta) && theta > lo && theta < hi;
}

double mgf(const JumpDistribution& dist, double theta) {
  if (!dist.mgf_finite(theta)) {
    const auto [lo, hi] = dist.mgf_interval();
    throw DivergenceError("MGF diverges at theta = " + std::to_string(theta) +
                          " (finite on (" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "))");
  }
  return std::visit(overloaded{
                        [&](const DoubleExponential& d) {
                          return d.p * d.theta1 / (d.theta1 - theta) +
                                 (1.0 - d.p) * d.theta2 / (d.theta2 + theta);
                        },
                        [&](const NormalJump& n) {
                          return std::exp(theta * n.mean +
                                          0.5 * theta * theta * n.stddev * n.stddev);
                        },
                        [&](const CustomJump& c) { return custom_mgf(c, theta); },
                    },
                    dist.law());
}

JumpMoments moments(const JumpDistribution& dist) {
  return std::visit(
      overloaded{
          [](const DoubleExponential& d) {
            const double mean = d.p / d.theta1 - (1.0 - d.p) / d.theta2;
            const double second =
                2.0 * d.p / (d.theta1 * d.theta1) + 2.0 * (1.0 - d.p) / (d.theta2 * d.theta2);
            return JumpMoments{mean, std::max(second - mean * mean, 0.0)};
          },
          [](const NormalJump& n) { return JumpMoments{n.mean, n.stddev * n.stddev}; },
          [](const CustomJump& c) {
            const double mass = custom_integral(c, [&](double x) { return c.density(x); });
            const double mean =
                custom_integral(c, [&](double x) { return x * c.density(x); }) / mass;
            const double var = custom_integral(c, [&](double x) {
                                 const double dx = x - mean;
                                 return dx * dx * c.density(x);
                               }) /
                               mass;
            return JumpMoments{mean, std::max(var, 0.0)};
          },
      },
      dist.law());
}

double density_at(const JumpDistribution& dist, double x) {
  return std::visit(overloaded{
                        [&](const DoubleExponential& d) {
                          return x >= 0.0 ? d.p * d.theta1 * std::exp(-d.theta1 * x)
                                          : (1.0 - d.p) * d.theta2 * std::exp(d.theta2 * x);
                        },
                        [&](const NormalJump& n) {
                          const double z = (x - n.mean) / n.stddev;
                          return std::exp(-0.5 * z * z) /
                                 (n.stddev * std::sqrt(2.0 * std::numbers::pi));
                        },
                        [&](const CustomJump& c) { return c.density(x); },
                    },
                    dist.law());
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

constexpr std::size_t kTableCells = 8192;
constexpr double kTailMass = 1e-13;

// Finds a finite range carrying all but ~kTailMass of the law.
std::pair<double, double> effective_support(const CustomJump& c) {
  auto dens = [&](double x) { return c.density(x); };
  double lo = c.support_lo;
  double hi = c.support_hi;
  const double anchor_lo = c.breakpoints.empty() ? (std::isfinite(hi) ? hi : 0.0)
                                                 : *std::min_element(c.breakpoints.begin(),
                                                                     c.breakpoints.end());
  const double anchor_hi = c.breakpoints.empty() ? (std::isfinite(lo) ? lo : 0.0)
                                                 : *std::max_element(c.breakpoints.begin(),
                                                                     c.breakpoints.end());
  if (std::isinf(lo)) {
    double w = 0.125;
    lo = anchor_lo - w;
    while (detail::integrate(dens, -kInf, lo, c.breakpoints) > kTailMass && w < 1e6) {
      w *= 2.0;
      lo = anchor_lo - w;
    }
  }
  if (std::isinf(hi)) {
    double w = 0.125;
    hi = anchor_hi + w;
    while (detail::integrate(dens, hi, kInf, c.breakpoints) > kTailMass && w < 1e6) {
      w *= 2.0;
      hi = anchor_hi + w;
    }
  }
  return {lo, hi};
}

}  // namespace

JumpSampler::JumpSampler(const JumpDistribution& dist) : law_(dist.law()) {
  const auto* c = dist.get_if<CustomJump>();
  if (c == nullptr) return;

  const auto [lo, hi] = effective_support(*c);
  auto table = std::make_shared<Table>();
  table->edges.resize(kTableCells + 1);
  table->cumulative.resize(kTableCells + 1);
  auto dens = [&](double x) { return c->density(x); };
  const double h = (hi - lo) / static_cast<double>(kTableCells);
  double acc = 0.0;
  table->edges[0] = lo;
  table->cumulative[0] = 0.0;
  for (std::size_t i = 1; i <= kTableCells; ++i) {
    const double a = lo + h * static_cast<double>(i - 1);
    const double b = i == kTableCells ? hi : lo + h * static_cast<double>(i);
    std::vector<double> inner;
    for (double bp : c->breakpoints) {
      if (bp > a && bp < b) inner.push_back(bp);
    }
    acc += detail::integrate(dens, a, b, inner);
    table->edges[i] = b;
    table->cumulative[i] = acc;
  }
  for (double& v : table->cumulative) v /= acc;
  table_ = std::move(table);
}

double JumpSampler::operator()(Rng& rng) const {
  return std::visit(
      overloaded{
          [&](const DoubleExponential& d) {
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const double e = std::exponential_distribution<double>(1.0)(rng);
            return u < d.p ? e / d.theta1 : -e / d.theta2;
          },
          [&](const NormalJump& n) {
            return std::normal_distribution<double>(n.mean, n.stddev)(rng);
          },
          [&](const CustomJump&) {
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto& cum = table_->cumulative;
            auto it = std::upper_bound(cum.begin() + 1, cum.end(), u);
            if (it == cum.end()) --it;
            const auto i = static_cast<std::size_t>(it - cum.begin());
            const double mass = cum[i] - cum[i - 1];
            const double frac = mass > 0.0 ? (u - cum[i - 1]) / mass : 0.5;
            return table_->edges[i - 1] + frac * (table_->edges[i] - table_->edges[i - 1]);
          },
      },
      law_);
}

}  // namespace regime_fx
