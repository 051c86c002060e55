#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lrdreg/error.hpp"

namespace lrdreg {

/// Dot product with four independent accumulators. The summation order is
/// fixed, so results do not depend on compiler vectorization choices.
inline double dot(const double* a, const double* b, std::size_t m) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    s0 += a[j] * b[j];
    s1 += a[j + 1] * b[j + 1];
    s2 += a[j + 2] * b[j + 2];
    s3 += a[j + 3] * b[j + 3];
  }
  for (; j < m; ++j) s0 += a[j] * b[j];
  return (s0 + s1) + (s2 + s3);
}

inline double mean(std::span<const double> v) {
  require(!v.empty(), ErrorCategory::empty_request, "mean of empty sequence");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Unbiased sample variance.
inline double sample_variance(std::span<const double> v) {
  require(v.size() >= 2, ErrorCategory::empty_request, "variance needs two values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double sample_correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, ErrorCategory::data, "correlation: misaligned arrays");
  const double ma = mean(a), mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Sample autocovariance at `lag` around the sample mean (divisor n).
inline double sample_autocovariance(std::span<const double> v, std::size_t lag) {
  require(lag < v.size(), ErrorCategory::data, "autocovariance lag exceeds sample");
  const double m = mean(v);
  double s = 0.0;
  for (std::size_t i = lag; i < v.size(); ++i) s += (v[i] - m) * (v[i - lag] - m);
  return s / static_cast<double>(v.size());
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  require(count >= 2, ErrorCategory::domain, "linspace needs two points");
  std::vector<double> out(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi > lo, ErrorCategory::domain, "logspace needs 0 < lo < hi");
  auto out = linspace(std::log(lo), std::log(hi), count);
  for (double& v : out) v = std::exp(v);
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Trapezoidal rule for samples `y` at abscissae `x`.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCategory::data, "trapezoid: misaligned arrays");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

/// Composite Simpson rule for f on [lo, hi] with `panels` (even) subintervals.
template <class F>
double simpson(F&& f, double lo, double hi, std::size_t panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (hi - lo) / static_cast<double>(panels);
  double s = f(lo) + f(hi);
  for (std::size_t i = 1; i < panels; ++i) {
    const double x = lo + h * static_cast<double>(i);
    s += (i % 2 ? 4.0 : 2.0) * f(x);
  }
  return s * h / 3.0;
}

}  // namespace lrdreg
