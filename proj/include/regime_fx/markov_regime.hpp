#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "regime_fx/linalg.hpp"

namespace regime_fx {

using Rng = std::mt19937_64;

/// Continuous-time finite-state Markov chain driving the regime parameters.
///
/// The generator uses the row convention: entry (i, j), i != j, is the rate of
/// jumping from state i to state j, and each row sums to zero.
class MarkovRegimeModel {
 public:
  /// Initial distribution defaults to the stationary distribution.
  explicit MarkovRegimeModel(Matrix generator);
  MarkovRegimeModel(Matrix generator, Vector initial_distribution);

  std::size_t n_states() const { return static_cast<std::size_t>(generator_.rows()); }
  const Matrix& generator() const { return generator_; }
  const Vector& initial_distribution() const { return initial_distribution_; }

  /// A single absorbing state.
  static MarkovRegimeModel single_state();

 private:
  Matrix generator_;
  Vector initial_distribution_;
};

enum class RegimeField { mu, sigma, lambda, r_d, r_f };

/// Per-state drift, volatility, jump intensity and domestic/foreign rates.
struct RegimeParameters {
  Vector mu;
  Vector sigma;
  Vector lambda;
  Vector r_d;
  Vector r_f;

  std::size_t n_states() const { return static_cast<std::size_t>(mu.size()); }

  /// Throws InvalidModelError unless every vector has n entries, sigma > 0,
  /// lambda >= 0 and all entries are finite.
  void validate(std::size_t n) const;

  const Vector& field(RegimeField f) const;

  /// Convenience constructor for a one-state model.
  static RegimeParameters constant(double mu, double sigma, double lambda, double r_d,
                                   double r_f);
};

double regime_value_at(const RegimeParameters& params, RegimeField field, std::size_t state);

struct OccupationTimes {
  Vector occupation;
  double horizon = 0.0;
  std::size_t terminal_state = 0;
};

/// Exact path simulator with the per-state jump tables precomputed, so that
/// repeated draws in Monte Carlo loops are cheap.  Holds no mutable state;
/// the caller owns the random engine.
class RegimeSimulator {
 public:
  explicit RegimeSimulator(const MarkovRegimeModel& model);

  std::size_t n_states() const { return exit_rate_.size(); }

  /// Calls visit(state, start, end) for every sojourn of one chain path on
  /// [0, horizon] in time order and returns the terminal state.
  template <class Visitor>
  std::size_t walk(double horizon, Rng& rng, Visitor&& visit) const;

  OccupationTimes occupation(double horizon, Rng& rng) const;

 private:
  std::size_t draw(const std::vector<double>& cumulative, Rng& rng) const;

  std::vector<double> exit_rate_;
  std::vector<std::vector<double>> jump_cumulative_;
  std::vector<double> initial_cumulative_;
};

/// One exact CTMC path's occupation vector over [0, horizon].
OccupationTimes simulate_occupation(const MarkovRegimeModel& model, double horizon,
                                    std::uint64_t rng_seed);

/// E[exp(<u, J(0, horizon)>)] = pi0^T exp((Pi + diag(u)) horizon) 1.
double occupation_char_function(const MarkovRegimeModel& model, std::span<const double> u,
                                double horizon);
std::complex<double> occupation_char_function(const MarkovRegimeModel& model,
                                              std::span<const std::complex<double>> u,
                                              double horizon);

// ---------------------------------------------------------------------------

template <class Visitor>
std::size_t RegimeSimulator::walk(double horizon, Rng& rng, Visitor&& visit) const {
  std::exponential_distribution<double> unit_exp(1.0);
  std::size_t state = draw(initial_cumulative_, rng);
  double t = 0.0;
  for (;;) {
    const double rate = exit_rate_[state];
    const double end = rate > 0.0 ? t + unit_exp(rng) / rate : horizon;
    if (end >= horizon) {
      visit(state, t, horizon);
      return state;
    }
    visit(state, t, end);
    t = end;
    state = draw(jump_cumulative_[state], rng);
  }
}

}  // namespace regime_fx
