#include "regime_fx/sweep.hpp"

#include <cmath>
#include <cstdio>

#include "regime_fx/errors.hpp"
#include "regime_fx/esscher.hpp"

namespace regime_fx {
namespace {

std::string format_number(double v, std::optional<int> round) {
  char buf[64];
  if (round) {
    std::snprintf(buf, sizeof buf, "%.*f", *round, v);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  return buf;
}

RiskNeutralModel curve_model(Curve curve, const SweepConfig& cfg, const RegimeParameters& params,
                             const MarkovRegimeModel& chain) {
  switch (curve) {
    case Curve::double_exponential:
      return build_risk_neutral_model(
          params, chain, JumpDistribution::double_exponential(cfg.theta1, cfg.theta2, cfg.p));
    case Curve::normal:
      return build_risk_neutral_model(params, chain,
                                      JumpDistribution::normal(cfg.mean_normal, cfg.sigma_normal));
    case Curve::no_jump: {
      RegimeParameters flat = params;
      flat.lambda.setZero();
      // The jump law is irrelevant once every intensity is zero.
      return build_risk_neutral_model(flat, chain, JumpDistribution::normal(0.0, 0.1));
    }
  }
  throw InputError("unknown curve");
}

PricingRequest request_for(const SweepConfig& cfg, double strike) {
  PricingRequest req;
  req.spot = cfg.s0;
  req.strike = strike;
  req.maturity = cfg.maturity;
  req.mc_samples = cfg.approx_num;
  req.time_steps = cfg.steps_num;
  req.series_tolerance = cfg.series_tolerance;
  req.rng_seed = cfg.seed;
  req.jump_variance = cfg.jump_variance;
  return req;
}

std::string status_of(const Error& e) {
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergent_mgf";
  if (dynamic_cast<const NoSolutionError*>(&e)) return "no_esscher_root";
  if (dynamic_cast<const InconsistencyError*>(&e)) return "inconsistent";
  if (dynamic_cast<const InvalidModelError*>(&e)) return "invalid_jump_law";
  return "error";
}

}  // namespace

std::string curve_name(Curve c) {
  switch (c) {
    case Curve::double_exponential: return "double_exponential";
    case Curve::normal: return "normal";
    case Curve::no_jump: return "no_jump";
  }
  return "unknown";
}

Curve parse_curve(const std::string& name) {
  if (name == "double_exponential") return Curve::double_exponential;
  if (name == "normal") return Curve::normal;
  if (name == "no_jump") return Curve::no_jump;
  throw InputError("unknown curve '" + name + "'");
}

void SweepConfig::validate() const {
  if (!(s0 > 0.0) || !(maturity > 0.0)) throw InputError("s0 and maturity must be positive");
  if (!(sk_min > 0.0) || !(sk_step > 0.0) || !(sk_min <= sk_max)) {
    throw InputError("S/K grid needs 0 < sk_min <= sk_max and sk_step > 0");
  }
  if (approx_num < 1 || steps_num < 1) throw InputError("approx_num and steps_num must be >= 1");
  if (curves.empty()) throw InputError("at least one curve is required");
}

SweepConfig figure_preset(int figure) {
  SweepConfig cfg;
  switch (figure) {
    case 2: cfg.maturity = 0.5; break;
    case 3: cfg.maturity = 1.0; break;
    case 4: cfg.maturity = 1.2; break;
    case 5: cfg.maturity = 0.5; cfg.theta1 = 5.0; break;
    case 6: cfg.maturity = 1.0; cfg.theta1 = 5.0; break;
    case 7: cfg.maturity = 1.2; cfg.theta1 = 5.0; break;
    case 8:
    case 9: cfg.maturity = 0.5; cfg.curves = {Curve::double_exponential}; break;
    default: throw InputError("figure presets exist for figures 2-9");
  }
  return cfg;
}

std::vector<double> arithmetic_range(double min, double max, double step) {
  if (!(step > 0.0) || !(max > min)) return {min};
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(min + step * static_cast<double>(i));
  return out;
}

std::vector<double> sk_grid(const SweepConfig& cfg) {
  return arithmetic_range(cfg.sk_min, cfg.sk_max, cfg.sk_step);
}

std::vector<PriceRow> run_price_sweep(const SweepConfig& cfg, const RegimeParameters& params,
                                      const MarkovRegimeModel& chain) {
  cfg.validate();
  params.validate(chain.n_states());
  std::vector<RiskNeutralModel> models;
  for (Curve c : cfg.curves) models.push_back(curve_model(c, cfg, params, chain));

  const auto paths = sample_occupations(chain, cfg.maturity, cfg.approx_num, cfg.seed);
  std::vector<PriceRow> rows;
  for (double sk : sk_grid(cfg)) {
    const PricingRequest req = request_for(cfg, cfg.s0 / sk);
    for (std::size_t c = 0; c < models.size(); ++c) {
      const auto est = price_from_occupations(req, models[c], paths);
      rows.push_back(PriceRow{sk, cfg.curves[c], est.value, est.std_error});
    }
  }
  return rows;
}

std::vector<ThetaRow> run_theta_sweep(const SweepConfig& cfg, const ThetaGrid& grid,
                                      const RegimeParameters& params,
                                      const MarkovRegimeModel& chain) {
  cfg.validate();
  params.validate(chain.n_states());
  const auto paths = sample_occupations(chain, cfg.maturity, cfg.approx_num, cfg.seed);
  const PricingRequest req = request_for(cfg, cfg.s0);

  std::vector<ThetaRow> rows;
  for (double t1 : grid.theta1) {
    for (double t2 : grid.theta2) {
      ThetaRow row;
      row.theta1 = t1;
      row.theta2 = t2;
      if (!(t1 > 1.0)) {
        row.status = "theta1_not_above_1";
        rows.push_back(row);
        continue;
      }
      try {
        const auto q = build_risk_neutral_model(
            params, chain, JumpDistribution::double_exponential(t1, t2, cfg.p));
        const auto est = price_from_occupations(req, q, paths);
        row.price = est.value;
        row.std_error = est.std_error;
      } catch (const Error& e) {
        row.status = status_of(e);
        row.price = std::nan("");
        row.std_error = std::nan("");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_price_csv(std::ostream& out, const std::vector<PriceRow>& rows,
                     std::optional<int> round) {
  out << "s_over_k,curve,price,std_error\n";
  for (const auto& r : rows) {
    out << format_number(r.s_over_k, round) << ',' << curve_name(r.curve) << ','
        << format_number(r.price, round) << ',' << format_number(r.std_error, round) << '\n';
  }
}

void write_theta_csv(std::ostream& out, const std::vector<ThetaRow>& rows,
                     std::optional<int> round) {
  out << "theta1,theta2,price,std_error,status\n";
  for (const auto& r : rows) {
    out << format_number(r.theta1, round) << ',' << format_number(r.theta2, round) << ','
        << format_number(r.price, round) << ',' << format_number(r.std_error, round) << ','
        << r.status << '\n';
  }
}

}  // namespace regime_fx
