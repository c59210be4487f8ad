#include "regime_fx/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

constexpr double kPip = 1e-4;

std::size_t as_index(TrendState s) { return static_cast<std::size_t>(s); }

// Forward trend starting at candle i: up is checked before down.
TrendState forward_trend(const std::vector<double>& open, std::size_t i,
                         const CalibrationConfig& cfg) {
  const double up = cfg.delta_up * kPip;
  const double down = cfg.delta_down * kPip;
  if (open[i + static_cast<std::size_t>(cfg.candles_up)] - open[i] >= up) return TrendState::up;
  if (open[i] - open[i + static_cast<std::size_t>(cfg.candles_down)] >= down) {
    return TrendState::down;
  }
  return TrendState::sideway;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

void CalibrationConfig::validate() const {
  for (int w : {candles_back_up, candles_back_down, candles_up, candles_down}) {
    if (w < 1) throw InputError("calibration windows must be at least one candle");
  }
  for (double d : {delta_back_up, delta_back_down, delta_up, delta_down}) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw InputError("calibration thresholds must be finite and non-negative");
    }
  }
}

int CalibrationConfig::max_back() const { return std::max(candles_back_up, candles_back_down); }

int CalibrationConfig::max_forward() const { return std::max(candles_up, candles_down); }

std::vector<TrendState> classify_states(const CandleSeries& series,
                                        const CalibrationConfig& cfg) {
  cfg.validate();
  const auto& open = series.opens;
  const auto back = static_cast<std::size_t>(cfg.max_back());
  if (open.size() < back + 1) {
    throw InputError("series has " + std::to_string(open.size()) +
                     " candles, lookback needs at least " + std::to_string(back + 1));
  }
  const double up = (cfg.verbatim_appendix ? cfg.delta_up : cfg.delta_back_up) * kPip;
  const double down = (cfg.verbatim_appendix ? cfg.delta_down : cfg.delta_back_down) * kPip;
  const auto back_up = static_cast<std::size_t>(cfg.candles_back_up);
  const auto back_down = static_cast<std::size_t>(cfg.candles_back_down);

  std::vector<TrendState> labels(open.size(), TrendState::sideway);
  for (std::size_t i = back; i < open.size(); ++i) {
    if (open[i] - open[i - back_up] >= up) labels[i] = TrendState::up;
    if (open[i - back_down] - open[i] >= down) labels[i] = TrendState::down;
  }
  return labels;
}

TransitionEstimate estimate_transition_matrix(const CandleSeries& series,
                                              const CalibrationConfig& cfg) {
  cfg.validate();
  const auto& open = series.opens;
  const auto needed = static_cast<std::size_t>(cfg.max_back() + cfg.max_forward() + 1);
  if (open.size() < needed) {
    throw InputError("series has " + std::to_string(open.size()) + " candles, need at least " +
                     std::to_string(needed));
  }
  const auto labels = classify_states(series, cfg);

  TransitionEstimate est;
  est.bar_interval = series.bar_interval;
  const std::size_t upper = open.size() - static_cast<std::size_t>(cfg.max_forward());
  for (std::size_t i = 0; i < upper; ++i) {
    ++est.counts[as_index(labels[i])][as_index(forward_trend(open, i, cfg))];
  }

  static constexpr const char* kNames[] = {"up", "down", "sideway"};
  for (std::size_t r = 0; r < 3; ++r) {
    std::int64_t total = 0;
    for (auto c : est.counts[r]) total += c;
    if (total == 0) {
      throw DegenerateDataError(std::string("no observations start in the '") + kNames[r] +
                                "' regime; its transition row is undefined");
    }
    for (std::size_t c = 0; c < 3; ++c) {
      est.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<double>(est.counts[r][c]) / static_cast<double>(total);
    }
  }
  return est;
}

MarkovRegimeModel embed_generator(const Matrix& transition, double bar_interval,
                                  double rate_cap) {
  const auto n = transition.rows();
  if (n == 0 || transition.cols() != n) throw InputError("transition matrix must be square");
  if (!(bar_interval > 0.0) || !std::isfinite(bar_interval)) {
    throw InputError("bar interval must be positive");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = transition(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw InputError("transition matrix entries must lie in [0, 1]");
      }
    }
    if (std::abs(transition.row(i).sum() - 1.0) > 1e-12) {
      throw InputError("transition matrix row " + std::to_string(i) + " does not sum to one");
    }
  }

  Matrix generator = (transition - Matrix::Identity(n, n)) / bar_interval;
  for (Eigen::Index i = 0; i < n; ++i) {
    double exit = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) exit += generator(i, j);
    }
    if (exit > rate_cap) {
      throw InputError("embedded exit rate " + std::to_string(exit) + " exceeds the cap " +
                       std::to_string(rate_cap) + " per year");
    }
    generator(i, i) = -exit;
  }
  const Vector pi = stationary_distribution(transition - Matrix::Identity(n, n));
  return MarkovRegimeModel(std::move(generator), pi);
}

MarkovRegimeModel embed_generator(const TransitionEstimate& est, double rate_cap) {
  return embed_generator(Matrix(est.matrix), est.bar_interval, rate_cap);
}

CandleSeries parse_candle_csv(std::istream& in, double bar_interval) {
  CandleSeries series;
  series.bar_interval = bar_interval;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto field = trim(line);
    if (field.empty()) continue;
    const auto value = parse_number(field);
    if (!value) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw InputError("line " + std::to_string(line_no) + ": '" + std::string(field) +
                       "' is not a number");
    }
    seen_content = true;
    if (!std::isfinite(*value) || *value <= 0.0) {
      throw InputError("line " + std::to_string(line_no) + ": open prices must be positive");
    }
    series.opens.push_back(*value);
  }
  if (series.opens.empty()) throw InputError("candle file contains no prices");
  return series;
}

CandleSeries read_candle_csv(const std::string& path, double bar_interval) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_candle_csv(in, bar_interval);
}

}  // namespace regime_fx
