#pragma once

#include <functional>
#include <span>

namespace regime_fx::detail {

/// Adaptive Gauss-Kronrod integral of f over [lo, hi], where either end may be
/// infinite.  The range is split at the given breakpoints; infinite tails are
/// covered by pieces of doubling width until they stop contributing.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 std::span<const double> breakpoints = {});

}  // namespace regime_fx::detail
