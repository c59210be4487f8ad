#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace regime_fx::detail {
namespace {

constexpr unsigned kMaxDepth = 18;
constexpr double kRelTol = 1e-13;

double finite_piece(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  // Boost compares the error on the reference interval, unscaled, against a
  // tolerance that is scaled by the half-width, so narrow pieces would never
  // converge.  Mapping onto [-1, 1] keeps the two on the same footing.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto g = [&](double t) { return f(mid + half * t); };
  return half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0,
                                                                             kMaxDepth, kRelTol);
}

// Integral over [start, start + direction * inf).
double tail(const std::function<double(double)>& f, double start, double direction,
            double running_total) {
  double sum = 0.0;
  double width = 1.0;
  int quiet = 0;
  for (int k = 0; k < 64 && quiet < 2; ++k) {
    const double next = start + direction * width;
    const double piece = direction > 0 ? finite_piece(f, start, next) : finite_piece(f, next, start);
    sum += piece;
    const double scale = std::abs(running_total + sum);
    quiet = scale > 0.0 && std::abs(piece) <= 1e-17 * scale ? quiet + 1 : 0;
    start = next;
    width *= 2.0;
  }
  return sum;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints) {
  if (lo > hi) return -integrate(f, hi, lo, breakpoints);

  std::vector<double> cuts;
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  if (std::isinf(lo) && std::isinf(hi) && cuts.empty()) cuts.push_back(0.0);

  std::vector<double> nodes;
  if (!std::isinf(lo)) nodes.push_back(lo);
  nodes.insert(nodes.end(), cuts.begin(), cuts.end());
  if (!std::isinf(hi)) nodes.push_back(hi);

  double total = 0.0;
  const double left_anchor = nodes.front();
  const double right_anchor = nodes.back();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    total += finite_piece(f, nodes[i], nodes[i + 1]);
  }
  if (std::isinf(lo)) total += tail(f, left_anchor, -1.0, total);
  if (std::isinf(hi)) total += tail(f, right_anchor, +1.0, total);
  return total;
}

}  // namespace regime_fx::detail
