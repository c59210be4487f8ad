#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regime_fx/calibration.hpp"
#include "regime_fx/errors.hpp"
#include "regime_fx/esscher.hpp"
#include "regime_fx/model_config.hpp"
#include "regime_fx/pricer.hpp"
#include "regime_fx/sweep.hpp"

using namespace regime_fx;

namespace {

struct Common {
  std::string config;
  std::string chain;
  std::string out;
  std::optional<int> round;
  std::optional<int> figure;
};

ModelInputs load_inputs(const Common& c) {
  ModelInputs inputs = c.config.empty() ? illustrative_model() : load_model_config(c.config);
  if (!c.chain.empty()) {
    MarkovRegimeModel chain = load_chain_config(c.chain);
    inputs.params.validate(chain.n_states());
    inputs.chain = std::move(chain);
  }
  return inputs;
}

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "regime model YAML (default: built-in illustrative model)");
  cmd->add_option("--chain", c.chain, "chain YAML overriding the model's generator");
  cmd->add_option("--out", c.out, "CSV output path (default stdout)");
  cmd->add_option("--round", c.round, "round numbers to N decimals")->check(CLI::Range(0, 17));
}

// Options that mirror SweepConfig.  Defaults are applied before parsing (or
// from --figure in a pre-pass), so explicit flags always win.
void add_sweep_options(CLI::App* cmd, SweepConfig& s, std::string& variance) {
  cmd->add_option("--s0", s.s0, "spot rate")->capture_default_str();
  cmd->add_option("--maturity,-T", s.maturity, "maturity in years")->capture_default_str();
  cmd->add_option("--theta1,--teta_1", s.theta1, "right decay rate")->capture_default_str();
  cmd->add_option("--theta2,--teta_2", s.theta2, "left decay rate")->capture_default_str();
  cmd->add_option("--p", s.p, "right-branch probability")->capture_default_str();
  cmd->add_option("--mean_normal,--mean-normal", s.mean_normal)->capture_default_str();
  cmd->add_option("--sigma_normal,--sigma-normal", s.sigma_normal)->capture_default_str();
  cmd->add_option("--approx_num,--approx-num", s.approx_num, "Monte Carlo occupation paths")
      ->capture_default_str();
  cmd->add_option("--steps_num,--steps-num", s.steps_num, "time steps (self-test)")
      ->capture_default_str();
  cmd->add_option("--seed", s.seed)->capture_default_str();
  cmd->add_option("--series_tolerance,--series-tolerance", s.series_tolerance)
      ->capture_default_str();
  cmd->add_option("--jump-variance", variance, "measure of the per-jump variance")
      ->check(CLI::IsMember({"risk_neutral", "physical"}))
      ->capture_default_str();
}

JumpVarianceMeasure parse_variance(const std::string& v) {
  return v == "physical" ? JumpVarianceMeasure::physical : JumpVarianceMeasure::risk_neutral;
}

std::optional<int> figure_from_argv(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--figure") return std::stoi(argv[i + 1]);
  }
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--figure=", 0) == 0) return std::stoi(a.substr(9));
  }
  return std::nullopt;
}

void print_matrix(std::ostream& out, const Matrix& m, int precision) {
  out << std::fixed << std::setprecision(precision);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "  " : "") << std::setw(12) << m(i, j);
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regime-switching jump-diffusion FX option pricer"};
  app.require_subcommand(1);

  SweepConfig sweep;
  std::optional<int> preset;
  try {
    preset = figure_from_argv(argc, argv);
    if (preset) sweep = figure_preset(*preset);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  Common common;
  std::string variance = "risk_neutral";

  // price-sweep
  auto* price = app.add_subcommand("price-sweep", "option price against S/K for each jump law");
  add_common(price, common);
  add_sweep_options(price, sweep, variance);
  price->add_option("--figure", common.figure, "start from the settings of figure 2-9");
  price->add_option("--sk_min,--sk-min", sweep.sk_min)->capture_default_str();
  price->add_option("--sk_max,--sk-max", sweep.sk_max)->capture_default_str();
  price->add_option("--sk_step,--sk-step", sweep.sk_step)->capture_default_str();
  std::vector<std::string> curves;
  price->add_option("--curves", curves, "subset of double_exponential, normal, no_jump")
      ->check(CLI::IsMember({"double_exponential", "normal", "no_jump"}))
      ->delimiter(',');

  // theta-sweep
  auto* theta = app.add_subcommand("theta-sweep", "at-the-money price over a theta1 x theta2 grid");
  add_common(theta, common);
  add_sweep_options(theta, sweep, variance);
  theta->add_option("--figure", common.figure, "start from the settings of figure 2-9");
  double t1_min = 2.0, t1_max = 20.0, t1_step = 1.0;
  double t2_min = 10.0, t2_max = 10.0, t2_step = 0.0;
  if (preset == 9) {
    t1_step = 2.0;
    t2_min = 2.0;
    t2_max = 20.0;
    t2_step = 2.0;
  }
  theta->add_option("--theta1-min", t1_min)->capture_default_str();
  theta->add_option("--theta1-max", t1_max)->capture_default_str();
  theta->add_option("--theta1-step", t1_step)->capture_default_str();
  theta->add_option("--theta2-min", t2_min)->capture_default_str();
  theta->add_option("--theta2-max", t2_max)->capture_default_str();
  theta->add_option("--theta2-step", t2_step, "0 keeps theta2 at --theta2-min")
      ->capture_default_str();

  // calibrate
  auto* calib = app.add_subcommand("calibrate", "estimate the regime chain from candle opens");
  CalibrationConfig cal;
  std::string input, model_out;
  double bar_interval = 1.0 / 252.0;
  calib->add_option("input", input, "single-column CSV of open prices")->required();
  calib->add_option("--bar-interval,--bar_interval", bar_interval, "years per candle")
      ->capture_default_str();
  calib->add_option("--candles_back_up,--candles-back-up", cal.candles_back_up)
      ->capture_default_str();
  calib->add_option("--candles_back_down,--candles-back-down", cal.candles_back_down)
      ->capture_default_str();
  calib->add_option("--delta_back_up,--delta-back-up", cal.delta_back_up, "pips")
      ->capture_default_str();
  calib->add_option("--delta_back_down,--delta-back-down", cal.delta_back_down, "pips")
      ->capture_default_str();
  calib->add_option("--candles_up,--candles-up", cal.candles_up)->capture_default_str();
  calib->add_option("--candles_down,--candles-down", cal.candles_down)->capture_default_str();
  calib->add_option("--delta_up,--delta-up", cal.delta_up, "pips")->capture_default_str();
  calib->add_option("--delta_down,--delta-down", cal.delta_down, "pips")->capture_default_str();
  calib->add_flag("--verbatim-appendix,--verbatim_appendix", cal.verbatim_appendix,
                  "backward tests use the forward thresholds, as in the reference script");
  calib->add_option("--model-out", model_out, "write the embedded chain as YAML");

  // selftest
  auto* self = app.add_subcommand("selftest", "Monte Carlo check that the discounted spot is a martingale");
  add_common(self, common);
  add_sweep_options(self, sweep, variance);
  self->add_option("--figure", common.figure, "start from the settings of figure 2-9");
  std::size_t paths = 100000;
  std::string law = "double_exponential";
  self->add_option("--paths", paths)->capture_default_str();
  self->add_option("--law", law)
      ->check(CLI::IsMember({"double_exponential", "normal"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    sweep.jump_variance = parse_variance(variance);
    if (price->parsed()) {
      if (!curves.empty()) {
        sweep.curves.clear();
        for (const auto& c : curves) sweep.curves.push_back(parse_curve(c));
      }
      const ModelInputs in = load_inputs(common);
      const auto rows = run_price_sweep(sweep, in.params, in.chain);
      emit(common.out, [&](std::ostream& o) { write_price_csv(o, rows, common.round); });
      return 0;
    }
    if (theta->parsed()) {
      const ModelInputs in = load_inputs(common);
      ThetaGrid grid{arithmetic_range(t1_min, t1_max, t1_step),
                     arithmetic_range(t2_min, t2_max, t2_step)};
      const auto rows = run_theta_sweep(sweep, grid, in.params, in.chain);
      emit(common.out, [&](std::ostream& o) { write_theta_csv(o, rows, common.round); });
      std::size_t flagged = 0;
      for (const auto& r : rows) flagged += r.ok() ? 0 : 1;
      if (flagged > 0) {
        std::cerr << flagged << " grid point(s) flagged\n";
        return 2;
      }
      return 0;
    }
    if (calib->parsed()) {
      const CandleSeries series = read_candle_csv(input, bar_interval);
      const TransitionEstimate est = estimate_transition_matrix(series, cal);
      const MarkovRegimeModel chain = embed_generator(est);
      std::cout << "candles: " << series.opens.size() << "\n";
      std::cout << "transition counts (rows/cols: up, down, sideway):\n";
      for (const auto& r : est.counts) {
        std::cout << "  " << std::setw(10) << r[0] << std::setw(10) << r[1] << std::setw(10)
                  << r[2] << '\n';
      }
      std::cout << "probability matrix:\n";
      print_matrix(std::cout, est.matrix, 4);
      std::cout << "generator (per year, bar interval " << bar_interval << "):\n";
      print_matrix(std::cout, chain.generator(), 4);
      std::cout << "stationary distribution:\n";
      print_matrix(std::cout, chain.initial_distribution().transpose(), 6);
      if (!model_out.empty()) {
        emit(model_out, [&](std::ostream& o) { write_chain_config(o, chain, &est); });
      }
      return 0;
    }
    if (self->parsed()) {
      const ModelInputs in = load_inputs(common);
      const JumpDistribution dist =
          law == "normal" ? JumpDistribution::normal(sweep.mean_normal, sweep.sigma_normal)
                          : JumpDistribution::double_exponential(sweep.theta1, sweep.theta2, sweep.p);
      const RiskNeutralModel q = build_risk_neutral_model(in.params, in.chain, dist);
      const auto est = martingale_self_test(q, sweep.maturity, paths, sweep.steps_num, sweep.seed);
      const double z = est.std_error > 0.0 ? (est.value - 1.0) / est.std_error : 0.0;
      std::printf("theta_j = %.12g  k_q = %.3g\n", q.esscher.theta_j, q.k_q);
      std::printf("E[S^d_T / S^d_0] = %.8f +- %.8f  (z = %.2f, %zu paths)\n", est.value,
                  est.std_error, z, paths);
      return std::abs(z) <= 3.0 ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
