#include "regime_fx/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

constexpr std::size_t kMaxSeriesTerms = 400;
constexpr double kZeroJumpTolerance = 1e-9;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Welford accumulator.
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  MonteCarloEstimate estimate() const {
    if (n_ < 2) return {mean_, 0.0};
    const double var = m2_ / static_cast<double>(n_ - 1);
    return {mean_, std::sqrt(std::max(var, 0.0) / static_cast<double>(n_))};
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

void require_zero_jump_mean(const RiskNeutralModel& q) {
  if (!(std::abs(q.k_q) <= kZeroJumpTolerance)) {
    throw InconsistencyError("pricing requires a zero risk-neutral mean jump size, got " +
                             std::to_string(q.k_q));
  }
}

OccupationStatistics statistics_with_variance(const OccupationTimes& occ,
                                              const RegimeParameters& params,
                                              const RiskNeutralModel& q, double sigma_j_sq) {
  if (!(occ.horizon > 0.0)) throw DomainError("occupation horizon must be positive");
  const Vector& j = occ.occupation;
  if (j.size() != params.mu.size() || j.size() != q.lambda_q.size()) {
    throw InvalidModelError("occupation vector does not match the number of states");
  }
  const double inv_t = 1.0 / occ.horizon;
  OccupationStatistics s;
  s.r_avg = inv_t * (params.r_d - params.r_f).dot(j);
  s.u_avg = inv_t * params.sigma.array().square().matrix().dot(j);
  // With k = 0 the (1 + k) lambda^Q weighting coincides with lambda^Q.
  s.lambda_avg = inv_t * (1.0 + q.k_q) * q.lambda_q.dot(j);
  s.sigma_j_sq = sigma_j_sq;
  return s;
}

}  // namespace

void PricingRequest::validate() const {
  if (!(spot > 0.0) || !(strike > 0.0) || !(maturity > 0.0) || !std::isfinite(spot) ||
      !std::isfinite(strike) || !std::isfinite(maturity)) {
    throw DomainError("spot, strike and maturity must be positive and finite");
  }
  if (mc_samples < 1) throw DomainError("mc_samples must be at least 1");
  if (time_steps < 1) throw DomainError("time_steps must be at least 1");
  if (!(series_tolerance > 0.0)) throw DomainError("series_tolerance must be positive");
}

double black_scholes_call(double spot, double strike, double maturity, double rate,
                          double variance_rate) {
  if (!(maturity > 0.0)) throw DomainError("black_scholes_call: maturity must be positive");
  if (variance_rate < 0.0) throw DomainError("black_scholes_call: negative variance rate");
  const double discount = std::exp(-rate * maturity);
  const double total_var = variance_rate * maturity;
  if (total_var == 0.0) return std::max(spot - strike * discount, 0.0);
  const double sd = std::sqrt(total_var);
  const double d1 = (std::log(spot / strike) + rate * maturity + 0.5 * total_var) / sd;
  const double d2 = d1 - sd;
  return std::max(spot * normal_cdf(d1) - strike * discount * normal_cdf(d2), 0.0);
}

double jump_variance(const RiskNeutralModel& q, JumpVarianceMeasure measure) {
  return moments(measure == JumpVarianceMeasure::risk_neutral ? q.jump_q : q.jump_p).variance;
}

OccupationStatistics occupation_statistics(const OccupationTimes& occ,
                                           const RegimeParameters& params,
                                           const RiskNeutralModel& q,
                                           JumpVarianceMeasure measure) {
  require_zero_jump_mean(q);
  return statistics_with_variance(occ, params, q, jump_variance(q, measure));
}

SeriesResult merton_series(const PricingRequest& req, const OccupationStatistics& stats) {
  const double t = req.maturity;
  const double mass = stats.lambda_avg * t;
  SeriesResult out;
  if (mass <= 0.0) {
    out.price = black_scholes_call(req.spot, req.strike, t, stats.r_avg, stats.u_avg);
    out.terms = 1;
    out.weight_total = 1.0;
    return out;
  }

  const double log_mass = std::log(mass);
  const double payoff_bound = std::max(req.spot, 1.0);
  for (std::size_t m = 0; m < kMaxSeriesTerms; ++m) {
    const double md = static_cast<double>(m);
    const double weight = std::exp(-mass + md * log_mass - std::lgamma(md + 1.0));
    const double variance = stats.u_avg + md * stats.sigma_j_sq / t;
    out.price += weight * black_scholes_call(req.spot, req.strike, t, stats.r_avg, variance);
    out.weight_total += weight;
    out.terms = m + 1;

    // Terms beyond m+1 shrink at least geometrically once m + 2 > mass.
    const double ratio = mass / (md + 2.0);
    if (ratio < 1.0) {
      const double next = weight * mass / (md + 1.0);
      const double tail = next / (1.0 - ratio);
      if (tail * payoff_bound <= req.series_tolerance) break;
    }
  }
  return out;
}

double merton_series_price(const PricingRequest& req, const OccupationStatistics& stats) {
  return merton_series(req, stats).price;
}

std::vector<OccupationTimes> sample_occupations(const MarkovRegimeModel& chain, double horizon,
                                                std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  const RegimeSimulator sim(chain);
  std::vector<OccupationTimes> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) out.push_back(sim.occupation(horizon, rng));
  return out;
}

MonteCarloEstimate price_from_occupations(const PricingRequest& req, const RiskNeutralModel& q,
                                          std::span<const OccupationTimes> paths) {
  req.validate();
  require_zero_jump_mean(q);
  if (paths.empty()) throw DomainError("no occupation paths supplied");
  const double sigma_j_sq = jump_variance(q, req.jump_variance);
  RunningMoments acc;
  for (const auto& occ : paths) {
    if (std::abs(occ.horizon - req.maturity) > 1e-12 * req.maturity) {
      throw DomainError("occupation horizon does not match the maturity");
    }
    acc.add(merton_series_price(req, statistics_with_variance(occ, q.base, q, sigma_j_sq)));
  }
  return acc.estimate();
}

MonteCarloEstimate price_european_call(const PricingRequest& req, const RiskNeutralModel& q) {
  req.validate();
  const auto paths = sample_occupations(q.chain, req.maturity, req.mc_samples, req.rng_seed);
  return price_from_occupations(req, q, paths);
}

MonteCarloEstimate martingale_self_test(const RiskNeutralModel& q, double maturity,
                                        std::size_t paths, std::size_t time_steps,
                                        std::uint64_t rng_seed) {
  if (!(maturity > 0.0)) throw DomainError("martingale_self_test: maturity must be positive");
  if (paths < 1 || time_steps < 1) {
    throw DomainError("martingale_self_test: paths and time_steps must be positive");
  }
  const auto n = static_cast<Eigen::Index>(q.chain.n_states());
  const RegimeParameters& p = q.base;

  // Drift of log S^d under the pricing measure, per state.
  Vector log_drift(n);
  Vector variance(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s2 = p.sigma(i) * p.sigma(i);
    log_drift(i) = p.r_f(i) - p.r_d(i) + p.mu(i) + q.esscher.theta_c(i) * s2 - 0.5 * s2;
    variance(i) = s2;
  }

  Rng rng(rng_seed);
  const RegimeSimulator sim(q.chain);
  const JumpSampler jump(q.jump_q);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double dt = maturity / static_cast<double>(time_steps);
  std::vector<double> cell_var(time_steps);
  RunningMoments acc;

  for (std::size_t path = 0; path < paths; ++path) {
    std::fill(cell_var.begin(), cell_var.end(), 0.0);
    double log_s = 0.0;
    double intensity_integral = 0.0;
    sim.walk(maturity, rng, [&](std::size_t state, double a, double b) {
      const auto s = static_cast<Eigen::Index>(state);
      log_s += log_drift(s) * (b - a);
      intensity_integral += q.lambda_q(s) * (b - a);
      auto cell = std::min(static_cast<std::size_t>(a / dt), time_steps - 1);
      double left = a;
      while (left < b) {
        const double cell_end =
            cell + 1 == time_steps ? maturity : dt * static_cast<double>(cell + 1);
        const double right = std::max(left, std::min(b, cell_end));
        cell_var[cell] += variance(s) * (right - left);
        left = right;
        if (cell + 1 == time_steps) break;
        ++cell;
      }
    });
    for (double v : cell_var) log_s += std::sqrt(v) * gauss(rng);
    if (intensity_integral > 0.0) {
      const auto jumps = std::poisson_distribution<long>(intensity_integral)(rng);
      for (long j = 0; j < jumps; ++j) log_s += jump(rng);
    }
    acc.add(std::exp(log_s));
  }
  return acc.estimate();
}

}  // namespace regime_fx
