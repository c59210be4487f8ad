#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "regime_fx/calibration.hpp"
#include "regime_fx/markov_regime.hpp"

namespace regime_fx {

struct ModelInputs {
  RegimeParameters params;
  MarkovRegimeModel chain;
};

/// Regime model in YAML:
///
///   mu: [..]  sigma: [..]  lambda: [..]  r_d: [..]  r_f: [..]
///   generator: [[..], ..]                     # rates per year, or
///   transition_matrix: [[..], ..]             # per candle, embedded with
///   bar_interval: 0.003968                    #   Pi = (P - I) / bar_interval
///   initial_distribution: [..]                # optional, default stationary
ModelInputs parse_model_config(const std::string& yaml_text);
ModelInputs load_model_config(const std::string& path);

/// Built-in three-state model (up, down, sideway) for demonstrations.  The
/// chain is the appendix EURUSD transition matrix embedded with daily candles;
/// the regime parameters are illustrative, not estimated.
ModelInputs illustrative_model();

/// Chain-only file: the `generator` / `transition_matrix` and
/// `initial_distribution` keys above.
MarkovRegimeModel parse_chain_config(const std::string& yaml_text);
MarkovRegimeModel load_chain_config(const std::string& path);

/// Writes a chain file readable by load_chain_config (and mergeable into a
/// model file).  When the estimate is given, its counts and matrix are
/// recorded alongside.
void write_chain_config(std::ostream& out, const MarkovRegimeModel& chain,
                        const TransitionEstimate* estimate = nullptr);

}  // namespace regime_fx
