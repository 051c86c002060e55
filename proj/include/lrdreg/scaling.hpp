#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "lrdreg/error.hpp"

namespace lrdreg {

/// Least-squares fit of log(y) = intercept + slope * log(x).
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // classical OLS standard error; 0 when only two points
  std::size_t points = 0;
};

inline ScalingFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCategory::data, "fit_log_log: misaligned arrays");
  require(x.size() >= 2, ErrorCategory::data, "fit_log_log: need at least two points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i]),
            ErrorCategory::data, "fit_log_log: values must be positive and finite");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorCategory::data, "fit_log_log: abscissae must not all coincide");

  ScalingFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

}  // namespace lrdreg
