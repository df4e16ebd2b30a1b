#pragma once

// Log-log order fits and Richardson extrapolation.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "shellgamma/errors.hpp"

namespace shellgamma {

struct OrderFit {
  double slope = 0.0;
  double r_squared = 0.0;
  bool exact = false;     // every residual was zero: slope reported as +inf
  int points_used = 0;
  int zeros_excluded = 0;
};

/// Least-squares slope of log(residual) against log(h). Residuals at or
/// below `zero_tol` are excluded and counted; if all are, the fit is exact.
inline OrderFit fit_order(const std::vector<std::pair<double, double>>& pairs,
                          double zero_tol = 0.0) {
  if (pairs.size() < 4) throw ParameterError("fit_order: need at least 4 (h, residual) pairs");
  std::vector<double> xs, ys;
  OrderFit fit;
  for (const auto& [h, r] : pairs) {
    if (!(h > 0.0) || !std::isfinite(r) || r < 0.0) {
      throw ParameterError("fit_order: h must be > 0 and residuals finite and >= 0");
    }
    if (r <= zero_tol) {
      ++fit.zeros_excluded;
      continue;
    }
    xs.push_back(std::log(h));
    ys.push_back(std::log(r));
  }
  fit.points_used = static_cast<int>(xs.size());
  if (xs.empty()) {
    fit.exact = true;
    fit.slope = std::numeric_limits<double>::infinity();
    fit.r_squared = 1.0;
    return fit;
  }
  if (xs.size() < 2) throw ParameterError("fit_order: fewer than 2 nonzero residuals");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

/// Two-point extrapolation assuming value(h) = L + C h^order.
inline double richardson(double h1, double v1, double h2, double v2, double order) {
  if (!(h1 > h2 && h2 > 0.0)) throw ParameterError("richardson: need h1 > h2 > 0");
  const double rp = std::pow(h1 / h2, order);
  return (rp * v2 - v1) / (rp - 1.0);
}

}  // namespace shellgamma
