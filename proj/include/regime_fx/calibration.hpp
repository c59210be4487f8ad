#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "regime_fx/linalg.hpp"
#include "regime_fx/markov_regime.hpp"

namespace regime_fx {

/// Open prices for consecutive candles.
struct CandleSeries {
  std::vector<double> opens;
  double bar_interval = 1.0 / 252.0;  // years per candle
};

/// Window lengths in candles, thresholds in pips (1 pip = 1e-4).
struct CalibrationConfig {
  int candles_back_up = 30;
  int candles_back_down = 30;
  double delta_back_up = 10.0;
  double delta_back_down = 10.0;
  int candles_up = 30;
  int candles_down = 30;
  double delta_up = 10.0;
  double delta_down = 10.0;
  // Reproduce the reference script literally: its backward tests read the
  // forward thresholds and ignore delta_back_up / delta_back_down.
  bool verbatim_appendix = false;

  void validate() const;
  int max_back() const;
  int max_forward() const;
};

/// Matrix ordering is (up, down, sideway).
enum class TrendState : std::uint8_t { up = 0, down = 1, sideway = 2 };

struct TransitionEstimate {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  std::array<std::array<std::int64_t, 3>, 3> counts{};
  double bar_interval = 1.0 / 252.0;
};

/// Trend label per candle from the lookback deltas.  The first max_back
/// candles stay sideway; when both tests pass, down wins.
std::vector<TrendState> classify_states(const CandleSeries& series, const CalibrationConfig& cfg);

/// Tallies (label at i) -> (forward trend from i) for every i whose forward
/// windows fit, checking up before down, and normalises each row.
TransitionEstimate estimate_transition_matrix(const CandleSeries& series,
                                              const CalibrationConfig& cfg);

/// First-order embedding Pi = (P - I) / bar_interval, started from the
/// stationary vector of P.  Rejects non-stochastic P and exit rates above
/// `rate_cap` per year.
MarkovRegimeModel embed_generator(const Matrix& transition, double bar_interval,
                                  double rate_cap = 1e6);
MarkovRegimeModel embed_generator(const TransitionEstimate& est, double rate_cap = 1e6);

/// Single-column CSV of opens; a non-numeric first line is taken as a header.
CandleSeries parse_candle_csv(std::istream& in, double bar_interval = 1.0 / 252.0);
CandleSeries read_candle_csv(const std::string& path, double bar_interval = 1.0 / 252.0);

}  // namespace regime_fx
