#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "regime_fx/markov_regime.hpp"
#include "regime_fx/pricer.hpp"

namespace regime_fx {

enum class Curve { double_exponential, normal, no_jump };

std::string curve_name(Curve c);
Curve parse_curve(const std::string& name);

/// Experiment settings; names follow Draw(S_0, T, approx_num, steps_num,
/// teta_1, teta_2, p, mean_normal, sigma_normal).
struct SweepConfig {
  double s0 = 1.0;
  double maturity = 0.5;
  double sk_min = 0.8;
  double sk_max = 1.25;
  double sk_step = 0.05;
  double theta1 = 10.0;
  double theta2 = 10.0;
  double p = 0.5;
  double mean_normal = 0.0;
  double sigma_normal = 0.1;
  std::size_t approx_num = 10000;
  std::size_t steps_num = 10;
  std::vector<Curve> curves{Curve::double_exponential, Curve::normal, Curve::no_jump};
  std::uint64_t seed = 42;
  double series_tolerance = 1e-12;
  JumpVarianceMeasure jump_variance = JumpVarianceMeasure::risk_neutral;

  void validate() const;
};

/// Settings of the published figures: 2-4 vary T with symmetric rates,
/// 5-7 use theta1 = 5, 8-9 are parameter sweeps at S/K = 1.
SweepConfig figure_preset(int figure);

/// S/K grid points sk_min, sk_min + step, ... <= sk_max.
std::vector<double> sk_grid(const SweepConfig& cfg);

struct PriceRow {
  double s_over_k = 0.0;
  Curve curve = Curve::no_jump;
  double price = 0.0;
  double std_error = 0.0;
};

/// Prices every (S/K, curve) pair with spot s0 and strike s0 / (S/K), all on
/// one shared set of occupation paths.  Rows are ordered by grid point, then
/// by the order of cfg.curves.
std::vector<PriceRow> run_price_sweep(const SweepConfig& cfg, const RegimeParameters& params,
                                      const MarkovRegimeModel& chain);

struct ThetaGrid {
  std::vector<double> theta1;
  std::vector<double> theta2;
};

/// Inclusive arithmetic range; a single value when step <= 0 or max <= min.
std::vector<double> arithmetic_range(double min, double max, double step);

struct ThetaRow {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double price = 0.0;
  double std_error = 0.0;
  std::string status = "ok";  // error code when the grid point is inadmissible

  bool ok() const { return status == "ok"; }
};

/// Double-exponential prices at S/K = 1 over theta1 x theta2, shared
/// occupation paths.  Inadmissible points are flagged and the sweep goes on.
std::vector<ThetaRow> run_theta_sweep(const SweepConfig& cfg, const ThetaGrid& grid,
                                      const RegimeParameters& params,
                                      const MarkovRegimeModel& chain);

/// Full precision unless `round` is given.
void write_price_csv(std::ostream& out, const std::vector<PriceRow>& rows,
                     std::optional<int> round = std::nullopt);
void write_theta_csv(std::ostream& out, const std::vector<ThetaRow>& rows,
                     std::optional<int> round = std::nullopt);

}  // namespace regime_fx
