#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "regime_fx/errors.hpp"
#include "regime_fx/jump_models.hpp"

using namespace regime_fx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CustomJump laplace_custom(double t1, double t2, double p, bool with_log) {
  CustomJump law;
  law.density = [=](double x) {
    return x >= 0.0 ? p * t1 * std::exp(-t1 * x) : (1 - p) * t2 * std::exp(t2 * x);
  };
  if (with_log) {
    law.log_density = [=](double x) {
      return x >= 0.0 ? std::log(p * t1) - t1 * x : std::log((1 - p) * t2) + t2 * x;
    };
  }
  law.theta_lo = -t2;
  law.theta_hi = t1;
  law.breakpoints = {0.0};
  return law;
}

double numeric_mgf(const JumpDistribution& d, double theta) {
  return oracle::tanh_sinh([&](double x) { return std::exp(theta * x) * density_at(d, x); },
                           -kInf, 0.0) +
         oracle::tanh_sinh([&](double x) { return std::exp(theta * x) * density_at(d, x); },
                           0.0, kInf);
}

}  // namespace

TEST(DoubleExponential, ValidatesParameters) {
  EXPECT_THROW(JumpDistribution::double_exponential(0.0, 1.0, 0.5), InvalidModelError);
  EXPECT_THROW(JumpDistribution::double_exponential(1.0, -1.0, 0.5), InvalidModelError);
  EXPECT_THROW(JumpDistribution::double_exponential(1.0, 1.0, 1.5), InvalidModelError);
  EXPECT_NO_THROW(JumpDistribution::double_exponential(1.0, 1.0, 0.0));
  EXPECT_NO_THROW(JumpDistribution::double_exponential(1.0, 1.0, 1.0));
}

TEST(DoubleExponential, MgfMatchesQuadrature) {
  const auto d = JumpDistribution::double_exponential(10.0, 7.0, 0.3);
  for (double theta : {-6.5, -3.0, -0.5, 0.0, 1.0, 4.0, 9.0}) {
    EXPECT_NEAR(mgf(d, theta), numeric_mgf(d, theta), 1e-10 * mgf(d, theta)) << theta;
  }
  EXPECT_DOUBLE_EQ(mgf(d, 0.0), 1.0);
}

TEST(DoubleExponential, MgfDivergesOutsideInterval) {
  const auto d = JumpDistribution::double_exponential(10.0, 7.0, 0.3);
  EXPECT_THROW(mgf(d, 10.0), DivergenceError);
  EXPECT_THROW(mgf(d, -7.0), DivergenceError);
  EXPECT_THROW(mgf(d, 12.0), DivergenceError);
  EXPECT_TRUE(d.mgf_finite(9.99));
  EXPECT_FALSE(d.mgf_finite(10.0));
  const auto [lo, hi] = d.mgf_interval();
  EXPECT_EQ(lo, -7.0);
  EXPECT_EQ(hi, 10.0);
}

TEST(DoubleExponential, MomentsAndDensity) {
  const double t1 = 10.0, t2 = 5.0, p = 0.4;
  const auto d = JumpDistribution::double_exponential(t1, t2, p);
  const auto m = moments(d);
  const double mean = p / t1 - (1 - p) / t2;
  EXPECT_NEAR(m.mean, mean, 1e-15);
  EXPECT_NEAR(m.variance, 2 * p / (t1 * t1) + 2 * (1 - p) / (t2 * t2) - mean * mean, 1e-15);
  EXPECT_DOUBLE_EQ(density_at(d, 0.0), p * t1);
  EXPECT_DOUBLE_EQ(density_at(d, -0.1), (1 - p) * t2 * std::exp(-0.5));
  // tanh-sinh never evaluates the endpoints, so the jump at zero is harmless.
  EXPECT_NEAR(oracle::tanh_sinh([&](double x) { return density_at(d, x); }, -8.0, 0.0) +
                  oracle::tanh_sinh([&](double x) { return density_at(d, x); }, 0.0, 8.0),
              1.0, 1e-10);
}

TEST(NormalJump, MgfAndMoments) {
  const auto d = JumpDistribution::normal(-0.02, 0.1);
  for (double theta : {-40.0, -1.0, 0.0, 2.0, 25.0}) {
    EXPECT_NEAR(mgf(d, theta), numeric_mgf(d, theta), 1e-10 * mgf(d, theta)) << theta;
  }
  EXPECT_TRUE(d.mgf_finite(1e6));
  EXPECT_NEAR(moments(d).mean, -0.02, 1e-16);
  EXPECT_NEAR(moments(d).variance, 0.01, 1e-16);
  EXPECT_THROW(JumpDistribution::normal(0.0, 0.0), InvalidModelError);
}

TEST(CustomJump, RequiresUnitMassAndAdmissibleInterval) {
  auto bad = laplace_custom(4.0, 4.0, 0.5, false);
  const auto f = bad.density;
  bad.density = [f](double x) { return 1.1 * f(x); };
  EXPECT_THROW(JumpDistribution::custom(bad), InvalidModelError);

  auto off = laplace_custom(4.0, 4.0, 0.5, false);
  off.theta_lo = 0.5;
  EXPECT_THROW(JumpDistribution::custom(off), InvalidModelError);

  EXPECT_THROW(JumpDistribution::custom(CustomJump{}), InvalidModelError);
}

TEST(CustomJump, QuadratureMgfMatchesClosedForm) {
  const auto closed = JumpDistribution::double_exponential(10.0, 7.0, 0.3);
  const auto plain = JumpDistribution::custom(laplace_custom(10.0, 7.0, 0.3, false));
  const auto logd = JumpDistribution::custom(laplace_custom(10.0, 7.0, 0.3, true));
  for (double theta : {-5.0, -0.5, 0.0, 1.0, 5.0}) {
    EXPECT_NEAR(mgf(plain, theta), mgf(closed, theta), 1e-10 * mgf(closed, theta)) << theta;
  }
  // Near the edge of the interval the tilted integrand lives where the
  // density itself underflows; the log-density path keeps full accuracy.
  for (double theta : {-6.9, 9.0, 9.9}) {
    EXPECT_NEAR(mgf(logd, theta), mgf(closed, theta), 1e-10 * mgf(closed, theta)) << theta;
  }
  EXPECT_THROW(mgf(logd, 10.0), DivergenceError);
  const auto m = moments(plain);
  EXPECT_NEAR(m.mean, moments(closed).mean, 1e-10);
  EXPECT_NEAR(m.variance, moments(closed).variance, 1e-10);
}

TEST(CustomJump, CompactSupportUniform) {
  CustomJump law;
  law.density = [](double) { return 2.5; };
  law.theta_lo = -kInf;
  law.theta_hi = kInf;
  law.support_lo = -0.3;
  law.support_hi = 0.1;
  const auto d = JumpDistribution::custom(law);
  for (double theta : {-3.0, 1.0, 7.0}) {
    const double ref = (std::exp(0.1 * theta) - std::exp(-0.3 * theta)) / (0.4 * theta);
    EXPECT_NEAR(mgf(d, theta), ref, 1e-12 * ref);
  }
  EXPECT_NEAR(moments(d).mean, -0.1, 1e-12);
  EXPECT_NEAR(moments(d).variance, 0.16 / 12.0, 1e-12);
}

TEST(CustomJump, SuppliedMgfIsUsed) {
  auto law = laplace_custom(10.0, 7.0, 0.3, false);
  law.mgf = [](double theta) { return 0.3 * 10 / (10 - theta) + 0.7 * 7 / (7 + theta); };
  const auto d = JumpDistribution::custom(law);
  EXPECT_DOUBLE_EQ(mgf(d, 9.99), 0.3 * 10 / (10 - 9.99) + 0.7 * 7 / (7 + 9.99));
}

TEST(JumpSampler, MatchesMoments) {
  const std::vector<JumpDistribution> laws{
      JumpDistribution::double_exponential(10.0, 5.0, 0.4), JumpDistribution::normal(0.03, 0.1),
      JumpDistribution::custom(laplace_custom(8.0, 6.0, 0.55, true))};
  for (const auto& d : laws) {
    const JumpSampler draw(d);
    Rng rng(21);
    const int n = 400000;
    double s = 0.0, s2 = 0.0, se = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = draw(rng);
      s += z;
      s2 += z * z;
      se += std::exp(z);
    }
    const auto m = moments(d);
    const double mean = s / n;
    const double tol = 4.0 * std::sqrt(m.variance / n);
    EXPECT_NEAR(mean, m.mean, tol);
    EXPECT_NEAR(s2 / n - mean * mean, m.variance, 0.02 * m.variance);
    EXPECT_NEAR(se / n, mgf(d, 1.0), 5.0 * std::sqrt((mgf(d, 2.0) - std::pow(mgf(d, 1.0), 2)) / n));
  }
}

TEST(JumpSampler, Reproducible) {
  const JumpSampler draw(JumpDistribution::double_exponential(3.0, 4.0, 0.5));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(draw(a), draw(b));
}
