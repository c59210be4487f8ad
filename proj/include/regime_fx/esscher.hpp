#pragma once

#include "regime_fx/jump_models.hpp"
#include "regime_fx/markov_regime.hpp"

namespace regime_fx {

/// Regime-switching Esscher parameters: one diffusion tilt per state and a
/// single, state-independent jump tilt.
struct EsscherParameters {
  Vector theta_c;
  double theta_j = 0.0;
};

/// The pricing-measure model.  Construct through build_risk_neutral_model,
/// which verifies the martingale condition; assemble_risk_neutral_model skips
/// that check and exists for negative controls.
struct RiskNeutralModel {
  RegimeParameters base;
  MarkovRegimeModel chain;
  JumpDistribution jump_p;
  EsscherParameters esscher;
  Vector lambda_q;
  JumpDistribution jump_q;
  double k_q = 0.0;

  /// r^f_i - r^d_i + mu_i + theta^c_i sigma_i^2 + lambda^Q_i k^Q, per state.
  Vector martingale_residual() const;
};

/// theta^c_i = (r^d_i - r^f_i - mu_i) / sigma_i^2.
Vector solve_theta_c(const RegimeParameters& params);

/// Admissible interval for the jump tilt: both M(theta) and M(theta + 1)
/// must be finite.  Empty intervals are returned with lo >= hi.
std::pair<double, double> admissible_theta_j_interval(const JumpDistribution& dist);

/// Root of M(theta + 1) = M(theta).  Closed forms for the two built-in laws,
/// bisection for custom laws.  The result is verified against
/// |M(theta + 1) / M(theta) - 1| <= 1e-9.
double solve_theta_j(const JumpDistribution& dist);

/// Bisection on g(theta) = M(theta + 1) - M(theta) over the admissible
/// interval, for any law.  Also serves as the reference for the closed forms.
double solve_theta_j_bisection(const JumpDistribution& dist, double tolerance = 1e-13);

/// lambda_i * M(theta_j).
Vector risk_neutral_intensity(const Vector& lambda_p, const JumpDistribution& dist,
                              double theta_j);

/// The pricing-measure jump law.
///  - double-exponential: same rates, right-branch weight p~ chosen so that
///    E~[e^Z] = M(theta_j + 1) / M(theta_j);
///  - normal: exponential tilt, mean shifted by theta_j sigma_J^2;
///  - custom: exponential tilt e^{theta_j x} nu(x) / M(theta_j).
JumpDistribution transform_jump_law(const JumpDistribution& dist, double theta_j);

/// k = E_q[e^Z] - 1.
double mean_jump_size(const JumpDistribution& dist_q);

RiskNeutralModel build_risk_neutral_model(const RegimeParameters& params,
                                          const MarkovRegimeModel& chain,
                                          const JumpDistribution& dist);

/// Assembles the model for arbitrary Esscher parameters without checking the
/// martingale condition.
RiskNeutralModel assemble_risk_neutral_model(const RegimeParameters& params,
                                             const MarkovRegimeModel& chain,
                                             const JumpDistribution& dist,
                                             const EsscherParameters& esscher);

}  // namespace regime_fx
