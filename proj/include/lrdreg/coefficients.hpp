#pragma once

// MA(infinity) coefficient sequences for long-memory linear processes and the
// exact second-order oracle for their partial sums.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lrdreg/error.hpp"

namespace lrdreg {

struct CoefficientSequence {
  std::vector<double> values;  // c_0 ... c_K
  double claimed_alpha = 1.0;  // memory exponent implied by the tail rate

  std::size_t truncation() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double sum_of_squares() const noexcept {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }
};

/// Default truncation for a sample of length n.
inline std::size_t default_truncation(std::size_t n) { return std::max<std::size_t>(5000, n); }

/// c_0 = 1, c_k = k^{-(alpha+1)/2}, then the whole sequence is rescaled so
/// that sum c_k^2 = 1 (unit marginal variance under unit-variance innovations).
inline CoefficientSequence linear_lrd_coeffs(double alpha, std::size_t K) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCategory::domain, "linear_lrd_coeffs: alpha must lie in (0,1)");
  require(K >= 2, ErrorCategory::domain, "linear_lrd_coeffs: need K >= 2");
  CoefficientSequence c;
  c.claimed_alpha = alpha;
  c.values.resize(K + 1);
  c.values[0] = 1.0;
  const double rate = -(alpha + 1.0) / 2.0;
  for (std::size_t k = 1; k <= K; ++k) c.values[k] = std::pow(static_cast<double>(k), rate);
  const double scale = 1.0 / std::sqrt(c.sum_of_squares());
  for (double& v : c.values) v *= scale;
  return c;
}

/// Fractional differencing filter (1 - B)^{-d}: psi_0 = 1,
/// psi_k = psi_{k-1} (k - 1 + d) / k. Not normalized; with unit-variance
/// innovations the marginal variance is sum psi_k^2 > 1 for d != 0.
inline CoefficientSequence farima_coeffs(double d, std::size_t K) {
  require(std::abs(d) < 0.5, ErrorCategory::domain, "farima_coeffs: |d| must be below 1/2");
  require(K >= 1, ErrorCategory::domain, "farima_coeffs: need K >= 1");
  CoefficientSequence c;
  c.claimed_alpha = 1.0 - 2.0 * d;
  c.values.assign(K + 1, 0.0);
  c.values[0] = 1.0;
  if (d == 0.0) return c;
  for (std::size_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    c.values[k] = c.values[k - 1] * (kd - 1.0 + d) / kd;
  }
  return c;
}

/// Maximum relative drift of c_k k^{(alpha+1)/2} over the last third of the
/// sequence; small values mean the claimed power-law tail is attained.
inline double tail_ratio_drift(const CoefficientSequence& c) {
  const std::size_t K = c.truncation();
  require(K >= 3, ErrorCategory::data, "tail_ratio_drift: sequence too short");
  const double rate = (c.claimed_alpha + 1.0) / 2.0;
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t k = K - K / 3; k <= K; ++k) {
    const double r = std::abs(c.values[k]) * std::pow(static_cast<double>(k), rate);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi / lo - 1.0;
}

/// gamma(k) = sum_j c_j c_{j+k} for k = 0 .. max_lag (zero beyond K).
inline std::vector<double> autocovariances(std::span<const double> c, std::size_t max_lag) {
  std::vector<double> gamma(max_lag + 1, 0.0);
  const std::size_t len = c.size();
  for (std::size_t k = 0; k <= max_lag && k < len; ++k) {
    const std::size_t m = len - k;
    const double* a = c.data();
    const double* b = c.data() + k;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= m; j += 4) {
      s0 += a[j] * b[j];
      s1 += a[j + 1] * b[j + 1];
      s2 += a[j + 2] * b[j + 2];
      s3 += a[j + 3] * b[j + 3];
    }
    for (; j < m; ++j) s0 += a[j] * b[j];
    gamma[k] = (s0 + s1) + (s2 + s3);
  }
  return gamma;
}

/// Var(sum_{i<=n} eps_i) = n gamma(0) + 2 sum_{k=1}^{n-1} (n - k) gamma(k),
/// given autocovariances up to lag n - 1.
inline double partial_sum_variance(std::span<const double> gamma, std::size_t n) {
  require(n >= 1, ErrorCategory::domain, "partial_sum_variance: n must be positive");
  require(gamma.size() >= n, ErrorCategory::data, "partial_sum_variance: autocovariances too short");
  double acc = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) acc += static_cast<double>(n - k) * gamma[k];
  return static_cast<double>(n) * gamma[0] + 2.0 * acc;
}

/// Exact partial-sum variance of the truncated linear process with
/// unit-variance innovations.
inline double partial_sum_variance_oracle(const CoefficientSequence& c, std::size_t n) {
  require(n >= 1, ErrorCategory::domain, "partial_sum_variance_oracle: n must be positive");
  const auto gamma = autocovariances(c.values, n - 1);
  return partial_sum_variance(gamma, n);
}

/// Oracle evaluated on a ladder of sample sizes, sharing one autocovariance pass.
inline std::vector<double> partial_sum_variance_ladder(const CoefficientSequence& c,
                                                       std::span<const std::size_t> ns) {
  require(!ns.empty(), ErrorCategory::empty_request, "partial_sum_variance_ladder: empty ladder");
  const std::size_t n_max = *std::max_element(ns.begin(), ns.end());
  const auto gamma = autocovariances(c.values, n_max - 1);
  std::vector<double> out;
  out.reserve(ns.size());
  for (std::size_t n : ns) out.push_back(partial_sum_variance(gamma, n));
  return out;
}

/// Coefficients of the one-step predictable part eps_{i,i-1} = sum_{k>=1} c_k eta_{i-k},
/// i.e. the input sequence with c_0 replaced by zero.
inline CoefficientSequence predictable_part(const CoefficientSequence& c) {
  CoefficientSequence p = c;
  if (!p.values.empty()) p.values[0] = 0.0;
  return p;
}

}  // namespace lrdreg
