#pragma once

// Finite-sample simulators for the error and predictor process families:
// i.i.d., linear long memory, FARIMA, functionals of linear processes,
// FARIMA-GARCH, stochastic volatility and LARCH.
//
// Time indexing: retained observations live at times 0 .. n-1 and every
// innovation stream is addressed by absolute time, so pre-sample values sit
// at negative times. Changing the burn-in therefore never reshuffles the
// innovations seen by the retained part of the path.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrdreg/coefficients.hpp"
#include "lrdreg/error.hpp"
#include "lrdreg/innovations.hpp"
#include "lrdreg/numeric.hpp"

namespace lrdreg {

enum class ProcessFamily {
  iid,
  linear_lrd,
  farima,
  functional_of_linear,
  farima_garch,
  stochastic_volatility,
  larch,
};

inline std::string_view to_string(ProcessFamily f) {
  switch (f) {
    case ProcessFamily::iid: return "iid";
    case ProcessFamily::linear_lrd: return "linear-lrd";
    case ProcessFamily::farima: return "farima";
    case ProcessFamily::functional_of_linear: return "functional-of-linear";
    case ProcessFamily::farima_garch: return "farima-garch";
    case ProcessFamily::stochastic_volatility: return "stochastic-volatility";
    case ProcessFamily::larch: return "larch";
  }
  return "?";
}

inline ProcessFamily parse_process_family(std::string_view s) {
  for (auto f : {ProcessFamily::iid, ProcessFamily::linear_lrd, ProcessFamily::farima,
                 ProcessFamily::functional_of_linear, ProcessFamily::farima_garch,
                 ProcessFamily::stochastic_volatility, ProcessFamily::larch})
    if (to_string(f) == s) return f;
  fail(ErrorCategory::config, "unknown process family '" + std::string(s) + "'");
}

enum class Functional { square_centered, abs_power_centered };

inline std::string_view to_string(Functional t) {
  return t == Functional::square_centered ? "square" : "abs-power";
}

inline Functional parse_functional(std::string_view s) {
  if (s == "square" || s == "square-centered") return Functional::square_centered;
  if (s == "abs-power" || s == "abs-power-centered") return Functional::abs_power_centered;
  fail(ErrorCategory::config, "unknown functional '" + std::string(s) + "'");
}

struct GarchParams {
  double a0 = 1.0;
  std::vector<double> arch;   // a_1 .. a_r
  std::vector<double> garch;  // beta_1 .. beta_s

  double persistence() const noexcept {
    return std::accumulate(arch.begin(), arch.end(), 0.0) + std::accumulate(garch.begin(), garch.end(), 0.0);
  }
  double stationary_variance() const noexcept { return a0 / (1.0 - persistence()); }

  friend bool operator==(const GarchParams&, const GarchParams&) = default;
};

struct FamilyParams {
  // functional-of-linear
  ProcessFamily base = ProcessFamily::linear_lrd;
  Functional functional = Functional::square_centered;
  double delta = 1.0;
  // Frozen E[T] for the abs-power functional; NaN until freeze_centering().
  double functional_mean = std::numeric_limits<double>::quiet_NaN();
  // farima-garch
  GarchParams garch;
  // stochastic volatility / LARCH: level a > 0 and coefficient scale.
  // SV: R_i = a + scale * sum_{k>=1} c_k eta_{i-k} with normalized c.
  // LARCH: scale is the target sum_{k>=1} b_k^2 of the feedback coefficients.
  double level = 1.0;
  double scale = 0.5;

  friend bool operator==(const FamilyParams& x, const FamilyParams& y) {
    const bool means_equal = (std::isnan(x.functional_mean) && std::isnan(y.functional_mean)) ||
                             x.functional_mean == y.functional_mean;
    return x.base == y.base && x.functional == y.functional && x.delta == y.delta && means_equal &&
           x.garch == y.garch && x.level == y.level && x.scale == y.scale;
  }
};

struct ProcessSpec {
  ProcessFamily family = ProcessFamily::iid;
  double alpha = 1.0;  // memory exponent; 1 means i.i.d.-type behaviour
  double d = 0.0;      // (1 - alpha) / 2
  InnovationSpec innovation;
  std::size_t truncation_K = 0;  // 0: default_truncation(n)
  std::size_t burn_in = 0;       // 0: equal to the truncation
  FamilyParams params;

  static ProcessSpec with_alpha(ProcessFamily family, double alpha, InnovationSpec innovation = {}) {
    ProcessSpec s;
    s.family = family;
    s.alpha = alpha;
    s.d = (1.0 - alpha) / 2.0;
    s.innovation = innovation;
    return s;
  }
  static ProcessSpec with_d(ProcessFamily family, double d, InnovationSpec innovation = {}) {
    ProcessSpec s;
    s.family = family;
    s.d = d;
    s.alpha = 1.0 - 2.0 * d;
    s.innovation = innovation;
    return s;
  }

  /// Copy with truncation and burn-in defaults filled in for sample size n.
  ProcessSpec resolved(std::size_t n) const {
    ProcessSpec s = *this;
    if (s.truncation_K == 0) s.truncation_K = default_truncation(n);
    if (s.burn_in == 0) s.burn_in = s.truncation_K;
    return s;
  }

  friend bool operator==(const ProcessSpec&, const ProcessSpec&) = default;
};

/// Whether the family is parametrized through the differencing parameter d
/// (and may therefore be antipersistent, alpha > 1).
inline bool uses_differencing(const ProcessSpec& s) {
  return s.family == ProcessFamily::farima || s.family == ProcessFamily::farima_garch ||
         (s.family == ProcessFamily::functional_of_linear && s.params.base == ProcessFamily::farima);
}

inline void validate(const GarchParams& g) {
  require(g.a0 > 0.0, ErrorCategory::config, "garch: a0 must be positive");
  for (double v : g.arch) require(v >= 0.0, ErrorCategory::config, "garch: ARCH coefficients must be nonnegative");
  for (double v : g.garch) require(v >= 0.0, ErrorCategory::config, "garch: GARCH coefficients must be nonnegative");
  require(g.persistence() < 1.0, ErrorCategory::config, "garch: sum a_j + sum beta_k must be below 1");
}

inline void validate(const ProcessSpec& s) {
  require(std::abs(s.d - (1.0 - s.alpha) / 2.0) <= 1e-15, ErrorCategory::config,
          "process: d must equal (1 - alpha) / 2");
  if (uses_differencing(s)) {
    require(std::abs(s.d) < 0.5, ErrorCategory::domain, "process: |d| must be below 1/2");
  } else {
    require(s.alpha > 0.0 && s.alpha <= 1.0, ErrorCategory::domain, "process: alpha must lie in (0,1]");
  }
  require(s.truncation_K >= 1, ErrorCategory::config, "process: truncation_K must be at least 1");
  require(s.burn_in >= s.truncation_K, ErrorCategory::config, "process: burn_in must be at least truncation_K");
  switch (s.family) {
    case ProcessFamily::linear_lrd:
    case ProcessFamily::stochastic_volatility:
    case ProcessFamily::larch:
      require(s.alpha < 1.0, ErrorCategory::domain, "process: long-memory family needs alpha < 1");
      break;
    case ProcessFamily::functional_of_linear:
      require(s.params.base == ProcessFamily::linear_lrd || s.params.base == ProcessFamily::farima,
              ErrorCategory::config, "functional-of-linear: base must be linear-lrd or farima");
      if (s.params.base == ProcessFamily::linear_lrd)
        require(s.alpha < 1.0, ErrorCategory::domain, "process: long-memory family needs alpha < 1");
      if (s.params.functional == Functional::abs_power_centered) {
        require(s.params.delta > 0.0, ErrorCategory::config, "functional: delta must be positive");
        require(s.innovation.law == InnovationLaw::standard_gaussian, ErrorCategory::config,
                "functional: abs-power centering is only defined for Gaussian innovations");
      }
      break;
    case ProcessFamily::farima_garch: validate(s.params.garch); break;
    default: break;
  }
  if (s.family == ProcessFamily::stochastic_volatility || s.family == ProcessFamily::larch)
    require(s.params.level > 0.0, ErrorCategory::config, "volatility level a must be positive");
  if (s.family == ProcessFamily::larch)
    require(s.params.scale >= 0.0 && s.params.scale < 1.0, ErrorCategory::stationarity,
            "larch: sum of squared coefficients must be below 1");
}

// ---------------------------------------------------------------------------
// Linear filtering

/// eps_i = sum_{k=0}^K c_k eta[i + K - k], i = 0 .. n-1, where `eta` holds
/// K pre-sample values followed by the n in-sample values.
inline std::vector<double> filter_linear(std::span<const double> c, std::span<const double> eta, std::size_t n) {
  require(!c.empty(), ErrorCategory::config, "filter_linear: empty coefficients");
  const std::size_t K = c.size() - 1;
  require(eta.size() >= n + K, ErrorCategory::config, "filter_linear: insufficient pre-sample");
  std::vector<double> rc(c.rbegin(), c.rend());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = dot(rc.data(), eta.data() + i, K + 1);
  return out;
}

/// Linear path together with its one-step decomposition.
struct LinearRun {
  std::vector<double> eps;       // eps_i
  std::vector<double> eps_pred;  // eps_{i,i-1} = sum_{k>=1} c_k eta_{i-k}
  std::vector<double> eta;       // eta_i, in-sample part
  double c0 = 1.0;
};

inline LinearRun run_linear(const CoefficientSequence& coeffs, std::span<const double> eta_with_presample,
                            std::size_t n) {
  const std::size_t K = coeffs.truncation();
  LinearRun run;
  run.c0 = coeffs.values.front();
  run.eps_pred = filter_linear(predictable_part(coeffs).values, eta_with_presample, n);
  run.eta.assign(eta_with_presample.begin() + static_cast<std::ptrdiff_t>(K),
                 eta_with_presample.begin() + static_cast<std::ptrdiff_t>(K + n));
  run.eps.resize(n);
  for (std::size_t i = 0; i < n; ++i) run.eps[i] = run.eps_pred[i] + run.c0 * run.eta[i];
  return run;
}

inline LinearRun run_linear(const CoefficientSequence& coeffs, const InnovationSpec& innov, std::size_t n,
                            std::size_t burn_in) {
  const std::size_t K = coeffs.truncation();
  require(burn_in >= K, ErrorCategory::config, "simulate_linear: burn_in must cover the truncation");
  require(n >= 1, ErrorCategory::empty_request, "simulate_linear: n must be positive");
  const auto eta = draw_innovations_from(innov, -static_cast<std::int64_t>(K), n + K);
  return run_linear(coeffs, eta, n);
}

inline std::vector<double> simulate_linear(const CoefficientSequence& coeffs, const InnovationSpec& innov,
                                           std::size_t n, std::size_t burn_in) {
  const std::size_t K = coeffs.truncation();
  require(burn_in >= K, ErrorCategory::config, "simulate_linear: burn_in must cover the truncation");
  require(n >= 1, ErrorCategory::empty_request, "simulate_linear: n must be positive");
  const auto eta = draw_innovations_from(innov, -static_cast<std::int64_t>(K), n + K);
  return filter_linear(coeffs.values, eta, n);
}

/// Coefficients for linear-type specs (linear-lrd, farima, and the base of a functional).
inline CoefficientSequence linear_coefficients(const ProcessSpec& s) {
  const ProcessFamily f = s.family == ProcessFamily::functional_of_linear ? s.params.base : s.family;
  switch (f) {
    case ProcessFamily::linear_lrd: return linear_lrd_coeffs(s.alpha, std::max<std::size_t>(2, s.truncation_K));
    case ProcessFamily::farima:
    case ProcessFamily::farima_garch: return farima_coeffs(s.d, s.truncation_K);
    default: fail(ErrorCategory::unsupported, "family has no linear coefficient sequence");
  }
}

// ---------------------------------------------------------------------------
// Functionals of linear processes

/// E[T] for T = u^2 applied to the linear value: sum c_k^2 (unit-variance innovations).
inline double square_functional_mean(const CoefficientSequence& c) { return c.sum_of_squares(); }

/// Monte Carlo estimate of E|X|^delta for X ~ N(0, sum c_k^2), frozen with a
/// fixed auxiliary seed.
inline double abs_power_functional_mean(const CoefficientSequence& c, double delta, std::size_t draws = 1'000'000) {
  const double sd = std::sqrt(c.sum_of_squares());
  const InnovationSpec aux{InnovationLaw::standard_gaussian, 0x5eedfaceULL};
  double s = 0.0;
  for (std::size_t i = 0; i < draws; ++i)
    s += std::pow(std::abs(sd * innovation_at(aux, static_cast<std::int64_t>(i))), delta);
  return s / static_cast<double>(draws);
}

inline double apply_functional(Functional t, double delta, double value) {
  return t == Functional::square_centered ? value * value : std::pow(std::abs(value), delta);
}

/// Spec copy with the functional centering constant computed and stored.
inline ProcessSpec freeze_centering(ProcessSpec s, std::size_t n) {
  s = s.resolved(n);
  if (s.family != ProcessFamily::functional_of_linear) return s;
  const auto c = linear_coefficients(s);
  s.params.functional_mean = s.params.functional == Functional::square_centered
                                 ? square_functional_mean(c)
                                 : abs_power_functional_mean(c, s.params.delta);
  return s;
}

/// eps_i = T(x_i) - mean for a given path of linear values.
inline std::vector<double> center_functional(Functional t, double delta, double centering,
                                             std::span<const double> linear_values) {
  std::vector<double> out(linear_values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = apply_functional(t, delta, linear_values[i]) - centering;
  return out;
}

// ---------------------------------------------------------------------------
// FARIMA-GARCH

/// GARCH(r, s) innovations eta_t = Z_t h_t^{1/2} for times first .. first+count-1,
/// started `burn_in` steps earlier from the stationary mean of h.
inline std::vector<double> garch_innovations(const GarchParams& g, const InnovationSpec& z_spec, std::int64_t first,
                                             std::size_t count, std::size_t burn_in) {
  validate(g);
  const std::size_t r = g.arch.size(), s = g.garch.size();
  const double h_bar = g.stationary_variance();
  const std::size_t total = burn_in + count;
  std::vector<double> eta(total), h(total);
  const std::int64_t t0 = first - static_cast<std::int64_t>(burn_in);
  for (std::size_t t = 0; t < total; ++t) {
    double ht = g.a0;
    for (std::size_t j = 1; j <= r; ++j) ht += g.arch[j - 1] * (t >= j ? eta[t - j] * eta[t - j] : h_bar);
    for (std::size_t k = 1; k <= s; ++k) ht += g.garch[k - 1] * (t >= k ? h[t - k] : h_bar);
    h[t] = ht;
    eta[t] = innovation_at(z_spec, t0 + static_cast<std::int64_t>(t)) * std::sqrt(ht);
  }
  return {eta.begin() + static_cast<std::ptrdiff_t>(burn_in), eta.end()};
}

struct GarchRun {
  std::vector<double> eps;
  std::vector<double> eps_pred;  // sum_{k>=1} psi_k eta_{i-k}
  std::vector<double> eta;       // GARCH innovations, in-sample part
};

inline GarchRun run_farima_garch(double d, const GarchParams& g, const InnovationSpec& innov, std::size_t n,
                                 std::size_t K, std::size_t burn_in) {
  require(std::abs(d) < 0.5, ErrorCategory::domain, "farima-garch: |d| must be below 1/2");
  validate(g);
  require(burn_in >= K, ErrorCategory::config, "farima-garch: burn_in must cover the truncation");
  const auto psi = farima_coeffs(d, K);
  const auto eta = garch_innovations(g, innov, -static_cast<std::int64_t>(K), n + K, burn_in);
  auto lin = run_linear(psi, eta, n);
  return {std::move(lin.eps), std::move(lin.eps_pred), std::move(lin.eta)};
}

inline std::vector<double> simulate_farima_garch(double d, const GarchParams& g, const InnovationSpec& innov,
                                                 std::size_t n, std::size_t K, std::size_t burn_in) {
  return run_farima_garch(d, g, innov, n, K, burn_in).eps;
}

// ---------------------------------------------------------------------------
// Stochastic volatility: eps_i = Z_i R_i, R_i = a + scale * sum_{k>=1} c_k eta_{i-k}

struct VolatilityRun {
  std::vector<double> eps;
  std::vector<double> volatility;  // R_i
  std::vector<double> z;           // Z_i
};

inline InnovationSpec volatility_stream(const InnovationSpec& s) { return {s.law, split_seed(s.seed, 1)}; }
inline InnovationSpec multiplier_stream(const InnovationSpec& s) { return {s.law, split_seed(s.seed, 2)}; }

/// Combines explicit volatility and multiplier paths.
inline VolatilityRun combine_volatility(std::vector<double> volatility, std::vector<double> z) {
  require(volatility.size() == z.size(), ErrorCategory::data, "volatility: misaligned paths");
  VolatilityRun run;
  run.eps.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) run.eps[i] = z[i] * volatility[i];
  run.volatility = std::move(volatility);
  run.z = std::move(z);
  return run;
}

inline VolatilityRun run_stochastic_volatility(const ProcessSpec& spec, std::size_t n) {
  const ProcessSpec s = spec.resolved(n);
  require(s.family == ProcessFamily::stochastic_volatility, ErrorCategory::unsupported,
          "run_stochastic_volatility: wrong family");
  validate(s);
  const auto c = linear_lrd_coeffs(s.alpha, std::max<std::size_t>(2, s.truncation_K));
  const std::size_t K = c.truncation();
  const auto eta = draw_innovations_from(volatility_stream(s.innovation), -static_cast<std::int64_t>(K), n + K);
  auto r = filter_linear(predictable_part(c).values, eta, n);
  for (double& v : r) v = s.params.level + s.params.scale * v;
  return combine_volatility(std::move(r), draw_innovations(multiplier_stream(s.innovation), n));
}

inline std::vector<double> simulate_stochastic_volatility(const ProcessSpec& spec, std::size_t n) {
  return run_stochastic_volatility(spec, n).eps;
}

// ---------------------------------------------------------------------------
// LARCH: eps*_i = Z_i R_i, R_i = a + sum_{k>=1} b_k eps*_{i-k}

/// b_0 = 0, b_k proportional to k^{-(alpha+1)/2}, scaled to sum b_k^2 = target.
inline CoefficientSequence larch_coeffs(double alpha, double target_sum_sq, std::size_t K) {
  require(target_sum_sq >= 0.0 && target_sum_sq < 1.0, ErrorCategory::stationarity,
          "larch: sum of squared coefficients must be below 1");
  CoefficientSequence b;
  b.claimed_alpha = alpha;
  b.values.assign(K + 1, 0.0);
  if (target_sum_sq == 0.0) return b;
  double ss = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    b.values[k] = std::pow(static_cast<double>(k), -(alpha + 1.0) / 2.0);
    ss += b.values[k] * b.values[k];
  }
  const double scale = std::sqrt(target_sum_sq / ss);
  for (double& v : b.values) v *= scale;
  return b;
}

/// Recursion started from R = a (no past) `burn_in` steps before time 0.
inline VolatilityRun run_larch(const CoefficientSequence& b, double level, const InnovationSpec& z_spec,
                               std::size_t n, std::size_t burn_in) {
  require(level > 0.0, ErrorCategory::config, "larch: level a must be positive");
  require(b.values.empty() || b.values.front() == 0.0, ErrorCategory::config, "larch: b_0 must be zero");
  require(b.sum_of_squares() < 1.0, ErrorCategory::stationarity, "larch: sum of squared coefficients must be below 1");
  const std::size_t K = b.truncation();
  const std::size_t total = burn_in + n;
  // Reversed feedback weights so that R_t is a contiguous dot product.
  std::vector<double> rb(K, 0.0);
  for (std::size_t k = 1; k <= K; ++k) rb[K - k] = b.values[k];
  std::vector<double> path(K + total, 0.0);  // K leading zeros: empty past
  std::vector<double> r(n), z(n);
  const std::int64_t t0 = -static_cast<std::int64_t>(burn_in);
  for (std::size_t t = 0; t < total; ++t) {
    const double rt = level + dot(rb.data(), path.data() + t, K);
    const double zt = innovation_at(z_spec, t0 + static_cast<std::int64_t>(t));
    path[K + t] = zt * rt;
    if (t >= burn_in) {
      r[t - burn_in] = rt;
      z[t - burn_in] = zt;
    }
  }
  return combine_volatility(std::move(r), std::move(z));
}

inline VolatilityRun run_larch(const ProcessSpec& spec, std::size_t n) {
  const ProcessSpec s = spec.resolved(n);
  require(s.family == ProcessFamily::larch, ErrorCategory::unsupported, "run_larch: wrong family");
  validate(s);
  const auto b = larch_coeffs(s.alpha, s.params.scale, s.truncation_K);
  return run_larch(b, s.params.level, s.innovation, n, s.burn_in);
}

inline std::vector<double> simulate_larch(const ProcessSpec& spec, std::size_t n) { return run_larch(spec, n).eps; }

// ---------------------------------------------------------------------------
// Dispatch

inline LinearRun conditional_mean_decomposition(const ProcessSpec& spec, std::size_t n) {
  const ProcessSpec s = spec.resolved(n);
  validate(s);
  require(s.family == ProcessFamily::linear_lrd || s.family == ProcessFamily::farima, ErrorCategory::unsupported,
          "conditional_mean_decomposition: family must be linear-lrd or farima");
  return run_linear(linear_coefficients(s), s.innovation, n, s.burn_in);
}

inline std::vector<double> simulate_functional_of_linear(const ProcessSpec& spec, std::size_t n) {
  ProcessSpec s = spec.resolved(n);
  require(s.family == ProcessFamily::functional_of_linear, ErrorCategory::unsupported,
          "simulate_functional_of_linear: wrong family");
  validate(s);
  if (std::isnan(s.params.functional_mean)) s = freeze_centering(s, n);
  const auto x = simulate_linear(linear_coefficients(s), s.innovation, n, s.burn_in);
  return center_functional(s.params.functional, s.params.delta, s.params.functional_mean, x);
}

/// Error path for any family.
inline std::vector<double> simulate_errors(const ProcessSpec& spec, std::size_t n) {
  require(n >= 1, ErrorCategory::empty_request, "simulate_errors: n must be positive");
  const ProcessSpec s = spec.resolved(n);
  validate(s);
  switch (s.family) {
    case ProcessFamily::iid: return draw_innovations(s.innovation, n);
    case ProcessFamily::linear_lrd:
    case ProcessFamily::farima: return simulate_linear(linear_coefficients(s), s.innovation, n, s.burn_in);
    case ProcessFamily::functional_of_linear: return simulate_functional_of_linear(s, n);
    case ProcessFamily::farima_garch:
      return simulate_farima_garch(s.d, s.params.garch, s.innovation, n, s.truncation_K, s.burn_in);
    case ProcessFamily::stochastic_volatility: return simulate_stochastic_volatility(s, n);
    case ProcessFamily::larch: return simulate_larch(s, n);
  }
  fail(ErrorCategory::unsupported, "simulate_errors: unknown family");
}

/// Path of eps_i together with its one-step conditional mean E[eps_i | H_{i-1}],
/// from the closed forms available for each family.
struct ConditionalPath {
  std::vector<double> eps;
  std::vector<double> cond_mean;
};

inline ConditionalPath conditional_path(const ProcessSpec& spec, std::size_t n) {
  const ProcessSpec s = spec.resolved(n);
  validate(s);
  ConditionalPath out;
  switch (s.family) {
    case ProcessFamily::iid:
      out.eps = draw_innovations(s.innovation, n);
      out.cond_mean.assign(n, 0.0);
      return out;
    case ProcessFamily::linear_lrd:
    case ProcessFamily::farima: {
      auto run = run_linear(linear_coefficients(s), s.innovation, n, s.burn_in);
      return {std::move(run.eps), std::move(run.eps_pred)};
    }
    case ProcessFamily::functional_of_linear: {
      require(s.params.functional == Functional::square_centered, ErrorCategory::unsupported,
              "conditional_path: only the square functional has a closed-form conditional mean");
      const auto c = linear_coefficients(s);
      const double centering = square_functional_mean(c);
      const auto run = run_linear(c, s.innovation, n, s.burn_in);
      out.eps.resize(n);
      out.cond_mean.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        out.eps[i] = run.eps[i] * run.eps[i] - centering;
        out.cond_mean[i] = run.c0 * run.c0 + run.eps_pred[i] * run.eps_pred[i] - centering;
      }
      return out;
    }
    case ProcessFamily::farima_garch: {
      auto run = run_farima_garch(s.d, s.params.garch, s.innovation, n, s.truncation_K, s.burn_in);
      return {std::move(run.eps), std::move(run.eps_pred)};
    }
    case ProcessFamily::stochastic_volatility:
    case ProcessFamily::larch: {
      auto run = s.family == ProcessFamily::larch ? run_larch(s, n) : run_stochastic_volatility(s, n);
      out.eps = std::move(run.eps);
      out.cond_mean.assign(n, 0.0);
      return out;
    }
  }
  fail(ErrorCategory::unsupported, "conditional_path: unknown family");
}

// ---------------------------------------------------------------------------
// Predictors

enum class PredictorMode { iid_gaussian, lrd_gaussian };

inline std::string_view to_string(PredictorMode m) {
  return m == PredictorMode::iid_gaussian ? "iid-gaussian" : "lrd-gaussian";
}

inline PredictorMode parse_predictor_mode(std::string_view s) {
  if (s == "iid-gaussian" || s == "iid") return PredictorMode::iid_gaussian;
  if (s == "lrd-gaussian" || s == "lrd") return PredictorMode::lrd_gaussian;
  fail(ErrorCategory::config, "unknown predictor mode '" + std::string(s) + "'");
}

struct PredictorSpec {
  PredictorMode mode = PredictorMode::iid_gaussian;
  double alpha_X = 1.0;
  double A0 = 1.0;
  InnovationSpec innovation;
  std::size_t truncation_K = 0;
  std::size_t burn_in = 0;

  friend bool operator==(const PredictorSpec&, const PredictorSpec&) = default;
};

/// a_0 = 1, a_k = A0 k^{-(alpha_X+1)/2}, rescaled to unit marginal variance.
inline CoefficientSequence predictor_coeffs(double alpha_X, double A0, std::size_t K) {
  require(alpha_X > 0.0 && alpha_X < 1.0, ErrorCategory::domain, "predictors: alpha_X must lie in (0,1)");
  require(A0 > 0.0, ErrorCategory::config, "predictors: A0 must be positive");
  require(K >= 1, ErrorCategory::config, "predictors: truncation must be positive");
  CoefficientSequence a;
  a.claimed_alpha = alpha_X;
  a.values.resize(K + 1);
  a.values[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) a.values[k] = A0 * std::pow(static_cast<double>(k), -(alpha_X + 1.0) / 2.0);
  const double scale = 1.0 / std::sqrt(a.sum_of_squares());
  for (double& v : a.values) v *= scale;
  return a;
}

inline std::vector<double> simulate_predictors(const PredictorSpec& spec, std::size_t n) {
  require(n >= 1, ErrorCategory::empty_request, "simulate_predictors: n must be positive");
  require(spec.innovation.law == InnovationLaw::standard_gaussian, ErrorCategory::config,
          "predictors: Gaussian innovations required");
  if (spec.mode == PredictorMode::iid_gaussian || spec.alpha_X == 1.0) return draw_innovations(spec.innovation, n);
  const std::size_t K = spec.truncation_K ? spec.truncation_K : default_truncation(n);
  const std::size_t burn_in = spec.burn_in ? spec.burn_in : K;
  require(burn_in >= K, ErrorCategory::config, "predictors: burn_in must cover the truncation");
  return simulate_linear(predictor_coeffs(spec.alpha_X, spec.A0, K), spec.innovation, n, burn_in);
}

}  // namespace lrdreg
