#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "regime_fx/esscher.hpp"
#include "regime_fx/markov_regime.hpp"

namespace regime_fx {

/// Which measure's jump law supplies the per-jump variance in the series.
enum class JumpVarianceMeasure { risk_neutral, physical };

struct PricingRequest {
  double spot = 1.0;
  double strike = 1.0;
  double maturity = 1.0;
  std::size_t mc_samples = 10000;  // approx_num
  std::size_t time_steps = 10;     // steps_num, self-test only
  double series_tolerance = 1e-12;
  std::uint64_t rng_seed = 0;
  JumpVarianceMeasure jump_variance = JumpVarianceMeasure::risk_neutral;

  void validate() const;
};

/// Occupation-weighted averages along one chain path.
struct OccupationStatistics {
  double r_avg = 0.0;       // (1/T) sum (r^d_i - r^f_i) J_i
  double u_avg = 0.0;       // (1/T) sum sigma_i^2 J_i
  double lambda_avg = 0.0;  // (1/T) sum lambda^Q_i J_i
  double sigma_j_sq = 0.0;  // jump-size variance
};

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Black-Scholes call with drift rate `rate` and variance per unit time
/// `variance_rate`.  Zero variance gives the discounted intrinsic value.
double black_scholes_call(double spot, double strike, double maturity, double rate,
                          double variance_rate);

/// Throws InconsistencyError unless q.k_q is zero, since only then do the
/// jump-count corrections to the rate vanish.
OccupationStatistics occupation_statistics(
    const OccupationTimes& occ, const RegimeParameters& params, const RiskNeutralModel& q,
    JumpVarianceMeasure measure = JumpVarianceMeasure::risk_neutral);

/// Jump-size variance entering the series for the chosen measure.
double jump_variance(const RiskNeutralModel& q, JumpVarianceMeasure measure);

struct SeriesResult {
  double price = 0.0;
  std::size_t terms = 0;
  double weight_total = 0.0;
};

/// Poisson-weighted sum of Black-Scholes prices with variance
/// U + m sigma_J^2 / T.  Weights are formed in log space; summation stops once
/// a geometric bound on the remaining Poisson mass, times max(spot, 1), falls
/// below the tolerance, or after 400 terms.
SeriesResult merton_series(const PricingRequest& req, const OccupationStatistics& stats);
double merton_series_price(const PricingRequest& req, const OccupationStatistics& stats);

/// req.mc_samples occupation paths drawn from a single engine seeded with
/// req.rng_seed.  The same seed always yields the same paths, which is how the
/// sweeps obtain common random numbers across curves.
std::vector<OccupationTimes> sample_occupations(const MarkovRegimeModel& chain, double horizon,
                                                std::size_t samples, std::uint64_t seed);

MonteCarloEstimate price_from_occupations(const PricingRequest& req, const RiskNeutralModel& q,
                                          std::span<const OccupationTimes> paths);

MonteCarloEstimate price_european_call(const PricingRequest& req, const RiskNeutralModel& q);

/// Simulates the discounted spot under the pricing measure and returns the
/// sample mean of S^d_T / S^d_0.  The Brownian part is drawn on `time_steps`
/// equal cells of [0, maturity], each with its exact regime-weighted variance.
MonteCarloEstimate martingale_self_test(const RiskNeutralModel& q, double maturity,
                                        std::size_t paths, std::size_t time_steps,
                                        std::uint64_t rng_seed);

}  // namespace regime_fx
