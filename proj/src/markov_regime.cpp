#include "regime_fx/markov_regime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

void validate_generator(const Matrix& g) {
  if (g.rows() == 0 || g.rows() != g.cols()) {
    throw InvalidModelError("generator must be a non-empty square matrix");
  }
  if (!g.allFinite()) {
    throw InvalidModelError("generator has non-finite entries");
  }
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j && g(i, j) < 0.0) {
        throw InvalidModelError("generator entry (" + std::to_string(i) + "," +
                                std::to_string(j) + ") is negative");
      }
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(g(i, i)));
    if (std::abs(g.row(i).sum()) > tol) {
      throw InvalidModelError("generator row " + std::to_string(i) + " does not sum to zero");
    }
  }
}

void validate_distribution(const Vector& pi, Eigen::Index n) {
  if (pi.size() != n) {
    throw InvalidModelError("initial distribution has the wrong length");
  }
  if (!pi.allFinite() || (pi.array() < 0.0).any()) {
    throw InvalidModelError("initial distribution must be finite and non-negative");
  }
  if (std::abs(pi.sum() - 1.0) > 1e-12) {
    throw InvalidModelError("initial distribution must sum to one");
  }
}

std::vector<double> cumulative_of(const Vector& weights) {
  std::vector<double> cum(static_cast<std::size_t>(weights.size()));
  const double total = weights.sum();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    acc += weights(j);
    cum[static_cast<std::size_t>(j)] = total > 0.0 ? acc / total : 0.0;
  }
  // Make the last state with positive weight absorb rounding in the tail.
  for (auto j = cum.size(); j-- > 0;) {
    if (weights(static_cast<Eigen::Index>(j)) > 0.0) {
      for (auto k = j; k < cum.size(); ++k) cum[k] = 1.0;
      break;
    }
  }
  return cum;
}

}  // namespace

MarkovRegimeModel::MarkovRegimeModel(Matrix generator) : generator_(std::move(generator)) {
  validate_generator(generator_);
  initial_distribution_ = stationary_distribution(generator_);
}

MarkovRegimeModel::MarkovRegimeModel(Matrix generator, Vector initial_distribution)
    : generator_(std::move(generator)), initial_distribution_(std::move(initial_distribution)) {
  validate_generator(generator_);
  validate_distribution(initial_distribution_, generator_.rows());
}

MarkovRegimeModel MarkovRegimeModel::single_state() {
  return MarkovRegimeModel(Matrix::Zero(1, 1), Vector::Ones(1));
}

void RegimeParameters::validate(std::size_t n) const {
  const auto expect = static_cast<Eigen::Index>(n);
  for (const Vector* v : {&mu, &sigma, &lambda, &r_d, &r_f}) {
    if (v->size() != expect) {
      throw InvalidModelError("regime parameter vectors must have one entry per state");
    }
    if (!v->allFinite()) {
      throw InvalidModelError("regime parameters must be finite");
    }
  }
  if ((sigma.array() <= 0.0).any()) {
    throw InvalidModelError("volatilities must be strictly positive");
  }
  if ((lambda.array() < 0.0).any()) {
    throw InvalidModelError("jump intensities must be non-negative");
  }
}

const Vector& RegimeParameters::field(RegimeField f) const {
  switch (f) {
    case RegimeField::mu: return mu;
    case RegimeField::sigma: return sigma;
    case RegimeField::lambda: return lambda;
    case RegimeField::r_d: return r_d;
    case RegimeField::r_f: return r_f;
  }
  throw IndexError("unknown regime field");
}

RegimeParameters RegimeParameters::constant(double mu, double sigma, double lambda, double r_d,
                                            double r_f) {
  RegimeParameters p;
  p.mu = Vector::Constant(1, mu);
  p.sigma = Vector::Constant(1, sigma);
  p.lambda = Vector::Constant(1, lambda);
  p.r_d = Vector::Constant(1, r_d);
  p.r_f = Vector::Constant(1, r_f);
  return p;
}

double regime_value_at(const RegimeParameters& params, RegimeField field, std::size_t state) {
  const Vector& v = params.field(field);
  if (state >= static_cast<std::size_t>(v.size())) {
    throw IndexError("state index " + std::to_string(state) + " out of range");
  }
  return v(static_cast<Eigen::Index>(state));
}

RegimeSimulator::RegimeSimulator(const MarkovRegimeModel& model) {
  const Matrix& g = model.generator();
  const auto n = g.rows();
  exit_rate_.resize(static_cast<std::size_t>(n));
  jump_cumulative_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector off = g.row(i).transpose();
    off(i) = 0.0;
    exit_rate_[static_cast<std::size_t>(i)] = off.sum();
    jump_cumulative_[static_cast<std::size_t>(i)] = cumulative_of(off);
  }
  initial_cumulative_ = cumulative_of(model.initial_distribution());
}

std::size_t RegimeSimulator::draw(const std::vector<double>& cumulative, Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

OccupationTimes RegimeSimulator::occupation(double horizon, Rng& rng) const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("occupation horizon must be positive and finite");
  }
  OccupationTimes out;
  out.occupation = Vector::Zero(static_cast<Eigen::Index>(n_states()));
  out.horizon = horizon;
  out.terminal_state = walk(horizon, rng, [&](std::size_t s, double start, double end) {
    out.occupation(static_cast<Eigen::Index>(s)) += end - start;
  });
  return out;
}

OccupationTimes simulate_occupation(const MarkovRegimeModel& model, double horizon,
                                    std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return RegimeSimulator(model).occupation(horizon, rng);
}

namespace {

template <class Scalar>
Scalar char_function_impl(const MarkovRegimeModel& model, std::span<const Scalar> u,
                          double horizon) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using V = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (!(horizon >= 0.0)) {
    throw DomainError("occupation_char_function: horizon must be non-negative");
  }
  const auto n = static_cast<Eigen::Index>(model.n_states());
  if (static_cast<Eigen::Index>(u.size()) != n) {
    throw InvalidModelError("occupation_char_function: u must have one entry per state");
  }
  M a = model.generator().template cast<Scalar>();
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) += u[static_cast<std::size_t>(i)];
  const M e = expm(M(a * Scalar(horizon)));
  const V pi0 = model.initial_distribution().template cast<Scalar>();
  return (pi0.transpose() * e * V::Ones(n))(0, 0);
}

}  // namespace

double occupation_char_function(const MarkovRegimeModel& model, std::span<const double> u,
                                double horizon) {
  return char_function_impl<double>(model, u, horizon);
}

std::complex<double> occupation_char_function(const MarkovRegimeModel& model,
                                              std::span<const std::complex<double>> u,
                                              double horizon) {
  return char_function_impl<std::complex<double>>(model, u, horizon);
}

}  // namespace regime_fx
