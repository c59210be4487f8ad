#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regime_fx/calibration.hpp"
#include "regime_fx/errors.hpp"
#include "regime_fx/esscher.hpp"
#include "regime_fx/jump_models.hpp"
#include "regime_fx/markov_regime.hpp"
#include "regime_fx/model_config.hpp"
#include "regime_fx/pricer.hpp"
#include "regime_fx/sweep.hpp"

namespace py = pybind11;
using namespace regime_fx;
using namespace pybind11::literals;

PYBIND11_MODULE(_regime_fx, m) {
  m.doc() = "Regime-switching jump-diffusion FX option pricing.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidModelError>(m, "InvalidModelError", base);
  py::register_exception<IndexError>(m, "IndexError", base);
  py::register_exception<DivergenceError>(m, "DivergenceError", base);
  py::register_exception<NoSolutionError>(m, "NoSolutionError", base);
  py::register_exception<InconsistencyError>(m, "InconsistencyError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<DegenerateDataError>(m, "DegenerateDataError", base);

  py::class_<MarkovRegimeModel>(m, "MarkovRegimeModel")
      .def(py::init<Matrix>(), "generator"_a)
      .def(py::init<Matrix, Vector>(), "generator"_a, "initial_distribution"_a)
      .def_property_readonly("n_states", &MarkovRegimeModel::n_states)
      .def_property_readonly("generator", &MarkovRegimeModel::generator)
      .def_property_readonly("initial_distribution", &MarkovRegimeModel::initial_distribution)
      .def_static("single_state", &MarkovRegimeModel::single_state);

  py::class_<RegimeParameters>(m, "RegimeParameters")
      .def(py::init([](Vector mu, Vector sigma, Vector lambda, Vector r_d, Vector r_f) {
             return RegimeParameters{mu, sigma, lambda, r_d, r_f};
           }),
           "mu"_a, "sigma"_a, "lambda_"_a, "r_d"_a, "r_f"_a)
      .def_readwrite("mu", &RegimeParameters::mu)
      .def_readwrite("sigma", &RegimeParameters::sigma)
      .def_readwrite("lambda_", &RegimeParameters::lambda)
      .def_readwrite("r_d", &RegimeParameters::r_d)
      .def_readwrite("r_f", &RegimeParameters::r_f)
      .def("validate", &RegimeParameters::validate)
      .def_static("constant", &RegimeParameters::constant, "mu"_a, "sigma"_a, "lambda_"_a,
                  "r_d"_a, "r_f"_a);

  py::class_<OccupationTimes>(m, "OccupationTimes")
      .def_readonly("occupation", &OccupationTimes::occupation)
      .def_readonly("horizon", &OccupationTimes::horizon)
      .def_readonly("terminal_state", &OccupationTimes::terminal_state);

  m.def("simulate_occupation", &simulate_occupation, "model"_a, "horizon"_a, "seed"_a);
  m.def(
      "occupation_char_function",
      [](const MarkovRegimeModel& model, const std::vector<double>& u, double horizon) {
        return occupation_char_function(model, std::span<const double>(u), horizon);
      },
      "model"_a, "u"_a, "horizon"_a);

  py::class_<JumpDistribution>(m, "JumpDistribution")
      .def_static("double_exponential", &JumpDistribution::double_exponential, "theta1"_a,
                  "theta2"_a, "p"_a)
      .def_static("normal", &JumpDistribution::normal, "mean"_a, "stddev"_a)
      .def_static(
          "custom",
          [](std::function<double(double)> density, double theta_lo, double theta_hi,
             double support_lo, double support_hi, std::vector<double> breakpoints) {
            CustomJump law;
            law.density = std::move(density);
            law.theta_lo = theta_lo;
            law.theta_hi = theta_hi;
            law.support_lo = support_lo;
            law.support_hi = support_hi;
            law.breakpoints = std::move(breakpoints);
            return JumpDistribution::custom(std::move(law));
          },
          "density"_a, "theta_lo"_a, "theta_hi"_a,
          "support_lo"_a = -std::numeric_limits<double>::infinity(),
          "support_hi"_a = std::numeric_limits<double>::infinity(),
          "breakpoints"_a = std::vector<double>{})
      .def_property_readonly("kind",
                             [](const JumpDistribution& d) {
                               switch (d.kind()) {
                                 case JumpKind::double_exponential: return "double_exponential";
                                 case JumpKind::normal: return "normal";
                                 default: return "custom";
                               }
                             })
      .def("mgf_interval", &JumpDistribution::mgf_interval)
      .def("mgf", [](const JumpDistribution& d, double theta) { return mgf(d, theta); })
      .def("density", [](const JumpDistribution& d, double x) { return density_at(d, x); })
      .def("moments", [](const JumpDistribution& d) {
        const auto mo = moments(d);
        return py::make_tuple(mo.mean, mo.variance);
      })
      .def_property_readonly("right_probability", [](const JumpDistribution& d) -> py::object {
        if (const auto* de = d.get_if<DoubleExponential>()) return py::float_(de->p);
        return py::none();
      });

  py::class_<EsscherParameters>(m, "EsscherParameters")
      .def_readonly("theta_c", &EsscherParameters::theta_c)
      .def_readonly("theta_j", &EsscherParameters::theta_j);

  py::class_<RiskNeutralModel>(m, "RiskNeutralModel")
      .def_readonly("esscher", &RiskNeutralModel::esscher)
      .def_readonly("lambda_q", &RiskNeutralModel::lambda_q)
      .def_readonly("jump_q", &RiskNeutralModel::jump_q)
      .def_readonly("k_q", &RiskNeutralModel::k_q)
      .def("martingale_residual", &RiskNeutralModel::martingale_residual);

  m.def("solve_theta_c", &solve_theta_c, "params"_a);
  m.def("solve_theta_j", &solve_theta_j, "dist"_a);
  m.def("solve_theta_j_bisection", &solve_theta_j_bisection, "dist"_a, "tolerance"_a = 1e-13);
  m.def("risk_neutral_intensity", &risk_neutral_intensity, "lambda_"_a, "dist"_a, "theta_j"_a);
  m.def("transform_jump_law", &transform_jump_law, "dist"_a, "theta_j"_a);
  m.def("build_risk_neutral_model", &build_risk_neutral_model, "params"_a, "chain"_a, "dist"_a);

  py::enum_<JumpVarianceMeasure>(m, "JumpVarianceMeasure")
      .value("risk_neutral", JumpVarianceMeasure::risk_neutral)
      .value("physical", JumpVarianceMeasure::physical);

  py::class_<PricingRequest>(m, "PricingRequest")
      .def(py::init([](double spot, double strike, double maturity, std::size_t mc_samples,
                       std::size_t time_steps, double series_tolerance, std::uint64_t rng_seed,
                       JumpVarianceMeasure jump_variance) {
             return PricingRequest{spot,     strike,          maturity, mc_samples, time_steps,
                                   series_tolerance, rng_seed, jump_variance};
           }),
           "spot"_a = 1.0, "strike"_a = 1.0, "maturity"_a = 1.0, "mc_samples"_a = 10000,
           "time_steps"_a = 10, "series_tolerance"_a = 1e-12, "rng_seed"_a = 0,
           "jump_variance"_a = JumpVarianceMeasure::risk_neutral)
      .def_readwrite("spot", &PricingRequest::spot)
      .def_readwrite("strike", &PricingRequest::strike)
      .def_readwrite("maturity", &PricingRequest::maturity)
      .def_readwrite("mc_samples", &PricingRequest::mc_samples)
      .def_readwrite("time_steps", &PricingRequest::time_steps)
      .def_readwrite("series_tolerance", &PricingRequest::series_tolerance)
      .def_readwrite("rng_seed", &PricingRequest::rng_seed)
      .def_readwrite("jump_variance", &PricingRequest::jump_variance);

  m.def("black_scholes_call", &black_scholes_call, "spot"_a, "strike"_a, "maturity"_a, "rate"_a,
        "variance_rate"_a);
  m.def(
      "price_european_call",
      [](const PricingRequest& req, const RiskNeutralModel& q) {
        const auto est = price_european_call(req, q);
        return py::make_tuple(est.value, est.std_error);
      },
      "request"_a, "model"_a);
  m.def(
      "martingale_self_test",
      [](const RiskNeutralModel& q, double maturity, std::size_t paths, std::size_t steps,
         std::uint64_t seed) {
        const auto est = martingale_self_test(q, maturity, paths, steps, seed);
        return py::make_tuple(est.value, est.std_error);
      },
      "model"_a, "maturity"_a, "paths"_a, "time_steps"_a = 10, "seed"_a = 0);

  py::class_<CalibrationConfig>(m, "CalibrationConfig")
      .def(py::init<>())
      .def_readwrite("candles_back_up", &CalibrationConfig::candles_back_up)
      .def_readwrite("candles_back_down", &CalibrationConfig::candles_back_down)
      .def_readwrite("delta_back_up", &CalibrationConfig::delta_back_up)
      .def_readwrite("delta_back_down", &CalibrationConfig::delta_back_down)
      .def_readwrite("candles_up", &CalibrationConfig::candles_up)
      .def_readwrite("candles_down", &CalibrationConfig::candles_down)
      .def_readwrite("delta_up", &CalibrationConfig::delta_up)
      .def_readwrite("delta_down", &CalibrationConfig::delta_down)
      .def_readwrite("verbatim_appendix", &CalibrationConfig::verbatim_appendix);

  m.def(
      "classify_states",
      [](const std::vector<double>& opens, const CalibrationConfig& cfg) {
        std::vector<int> out;
        for (auto s : classify_states(CandleSeries{opens}, cfg)) out.push_back(static_cast<int>(s));
        return out;
      },
      "opens"_a, "config"_a = CalibrationConfig{},
      "Labels per candle: 0 up, 1 down, 2 sideway.");
  m.def(
      "estimate_transition_matrix",
      [](const std::vector<double>& opens, const CalibrationConfig& cfg) {
        const auto est = estimate_transition_matrix(CandleSeries{opens}, cfg);
        return py::make_tuple(Matrix(est.matrix), est.counts);
      },
      "opens"_a, "config"_a = CalibrationConfig{});
  m.def("embed_generator",
        py::overload_cast<const Matrix&, double, double>(&embed_generator), "transition"_a,
        "bar_interval"_a, "rate_cap"_a = 1e6);
  m.def("illustrative_model", [] {
    auto in = illustrative_model();
    return py::make_tuple(in.params, in.chain);
  });
  m.def("load_model_config", [](const std::string& path) {
    auto in = load_model_config(path);
    return py::make_tuple(in.params, in.chain);
  });

  m.def(
      "price_sweep",
      [](const RegimeParameters& params, const MarkovRegimeModel& chain, double s0,
         double maturity, double sk_min, double sk_max, double sk_step, double theta1,
         double theta2, double p, double mean_normal, double sigma_normal,
         std::size_t approx_num, std::uint64_t seed, std::vector<std::string> curves) {
        SweepConfig cfg;
        cfg.s0 = s0;
        cfg.maturity = maturity;
        cfg.sk_min = sk_min;
        cfg.sk_max = sk_max;
        cfg.sk_step = sk_step;
        cfg.theta1 = theta1;
        cfg.theta2 = theta2;
        cfg.p = p;
        cfg.mean_normal = mean_normal;
        cfg.sigma_normal = sigma_normal;
        cfg.approx_num = approx_num;
        cfg.seed = seed;
        cfg.curves.clear();
        for (const auto& c : curves) cfg.curves.push_back(parse_curve(c));
        py::list out;
        for (const auto& r : run_price_sweep(cfg, params, chain)) {
          out.append(py::make_tuple(r.s_over_k, curve_name(r.curve), r.price, r.std_error));
        }
        return out;
      },
      "params"_a, "chain"_a, "s0"_a = 1.0, "maturity"_a = 0.5, "sk_min"_a = 0.8,
      "sk_max"_a = 1.25, "sk_step"_a = 0.05, "theta1"_a = 10.0, "theta2"_a = 10.0, "p"_a = 0.5,
      "mean_normal"_a = 0.0, "sigma_normal"_a = 0.1, "approx_num"_a = 10000, "seed"_a = 42,
      "curves"_a = std::vector<std::string>{"double_exponential", "normal", "no_jump"},
      "Rows of (s_over_k, curve, price, std_error) on shared occupation paths.");
}
