#pragma once

// Empirical risk functionals (ASE, discretized ISE, leave-block-out CV) and
// the asymptotic MISE / MISE* expansions with their numeric minimizers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdreg/coefficients.hpp"
#include "lrdreg/error.hpp"
#include "lrdreg/estimators.hpp"
#include "lrdreg/functions.hpp"
#include "lrdreg/kernels.hpp"
#include "lrdreg/numeric.hpp"

namespace lrdreg {

// ---------------------------------------------------------------------------
// Empirical criteria

struct CriterionValue {
  double value = 0.0;
  std::size_t flagged = 0;   // points dropped because of the density floor
  std::size_t excluded = 0;  // points outside the trimming region
};

/// n^{-1} sum (m_h(X_i) - m(X_i))^2 over X_i in `region`; divisor stays n.
inline CriterionValue ase(const RegressionSample& sample, const SortedSample& sorted, const KernelSpec& k, double h,
                          const Region& region = {}) {
  require_bandwidth(h);
  const auto truth = sample.truth();
  require(truth.has_value(), ErrorCategory::unsupported, "ase: sample carries no true regression function");
  CriterionValue out;
  double acc = 0.0;
  for (double xi : sample.x) {
    if (!region.contains(xi)) {
      ++out.excluded;
      continue;
    }
    const auto est = nw_at(sorted, k, h, xi);
    if (!est) {
      ++out.flagged;
      continue;
    }
    const double e = *est - (*truth)(xi);
    acc += e * e;
  }
  out.value = acc / static_cast<double>(sample.size());
  return out;
}

inline CriterionValue ase(const RegressionSample& sample, const KernelSpec& k, double h, const Region& region = {}) {
  validate(sample);
  return ase(sample, SortedSample(sample), k, h, region);
}

/// CV_l(h) = n^{-1} sum_i (Y_i - m_{i,h}(X_i))^2 where m_{i,h} omits every j
/// with |j - i| <= l. Points outside `region` are skipped (divisor stays n).
inline CriterionValue cv_criterion(const RegressionSample& sample, const SortedSample& sorted, const KernelSpec& k,
                                   double h, std::size_t l, const Region& region = {}) {
  require_bandwidth(h);
  const std::size_t n = sample.size();
  require(n > 2 * l + 1, ErrorCategory::domain, "cv_criterion: need n > 2l + 1");
  const double floor = static_cast<double>(n) * h * density_floor;
  CriterionValue out;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = sample.x[i];
    if (!region.contains(xi)) {
      ++out.excluded;
      continue;
    }
    auto sums = sorted.sums(k, h, xi);
    const std::size_t lo = i >= l ? i - l : 0;
    const std::size_t hi = std::min(n - 1, i + l);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double w = k((xi - sample.x[j]) / h);
      sums.weight -= w;
      sums.weighted_y -= w * sample.y[j];
    }
    if (sums.weight < floor) {
      ++out.flagged;
      continue;
    }
    const double r = sample.y[i] - sums.weighted_y / sums.weight;
    acc += r * r;
  }
  out.value = acc / static_cast<double>(n);
  return out;
}

inline CriterionValue cv_criterion(const RegressionSample& sample, const KernelSpec& k, double h, std::size_t l,
                                   const Region& region = {}) {
  validate(sample);
  return cv_criterion(sample, SortedSample(sample), k, h, l, region);
}

/// Trapezoid-discretized integral of (estimate - target)^2 * weight over the
/// estimate's grid; flagged points contribute zero.
inline double integrated_squared_error(const EstimateGrid& est, std::span<const double> target,
                                       std::span<const double> weight) {
  require(target.size() == est.points.size() && weight.size() == est.points.size(), ErrorCategory::data,
          "integrated_squared_error: misaligned arrays");
  std::vector<double> integrand(est.points.size(), 0.0);
  for (std::size_t g = 0; g < integrand.size(); ++g) {
    if (est.flagged[g]) continue;
    const double e = est.values[g] - target[g];
    integrand[g] = e * e * weight[g];
  }
  return trapezoid(est.points, integrand);
}

// ---------------------------------------------------------------------------
// Theory

enum class RiskWeight { density, uniform };  // r = f or r = 1, both restricted to the evaluation region

struct TheoryConstants {
  double I_var = 0.0;   // int r / f
  double I_bias = 0.0;  // int (rho / f)^2 r,  rho = m'' f + 2 m' f'
  double I_fpp = 0.0;   // int (f'' / f) r
  double C1 = 0.0;      // Var(sum eps)  ~ C1^2 n^{2 - alpha}
  double A1 = 0.0;      // Var(sum X)    ~ A1^2 n^{2 - alpha_X}
  double Em_X = 0.0;    // E[m(X_1) X_1]
  double error_variance = 1.0;  // E[eps_1^2]; the expansions assume 1
};

inline double weight_value(RiskWeight r, const DesignDensity& f, double x) {
  return r == RiskWeight::density ? f(x) : 1.0;
}

/// C^2 := Var(S_n) / n^{2 - alpha} at the reference size n, from the exact oracle.
inline double long_run_constant_sq(const CoefficientSequence& c, double alpha, std::size_t n_ref) {
  const double v = partial_sum_variance_oracle(c, n_ref);
  return v / std::pow(static_cast<double>(n_ref), 2.0 - alpha);
}

struct TheorySetup {
  TrueFunction m;
  DesignDensity f;
  RiskWeight weight = RiskWeight::density;
  double region_lo = 0.0, region_hi = 0.0;
  std::optional<CoefficientSequence> error_coeffs;      // nullopt: i.i.d. unit-variance errors
  std::optional<CoefficientSequence> predictor_coeffs;  // nullopt: i.i.d. predictors
  std::size_t n_ref = 1;
};

inline TheoryConstants compute_theory_constants(const TheorySetup& s) {
  require(s.region_hi > s.region_lo, ErrorCategory::domain, "theory: empty integration region");
  const auto& m = s.m;
  const auto& f = s.f;
  TheoryConstants c;
  c.I_var = simpson([&](double x) { return weight_value(s.weight, f, x) / f(x); }, s.region_lo, s.region_hi);
  c.I_bias = simpson(
      [&](double x) {
        const double fx = f(x);
        const double rho = m.d2(x) * fx + 2.0 * m.d1(x) * f.d1(x);
        return rho * rho / (fx * fx) * weight_value(s.weight, f, x);
      },
      s.region_lo, s.region_hi);
  c.I_fpp = simpson([&](double x) { return f.d2(x) / f(x) * weight_value(s.weight, f, x); }, s.region_lo,
                    s.region_hi);
  if (s.error_coeffs) {
    const double alpha = std::min(1.0, s.error_coeffs->claimed_alpha);
    c.C1 = std::sqrt(long_run_constant_sq(*s.error_coeffs, alpha, s.n_ref));
    c.error_variance = s.error_coeffs->sum_of_squares();
  } else {
    c.C1 = 1.0;
  }
  if (s.predictor_coeffs) {
    c.A1 = std::sqrt(long_run_constant_sq(*s.predictor_coeffs, s.predictor_coeffs->claimed_alpha, s.n_ref));
  } else {
    c.A1 = 1.0;
  }
  const auto [flo, fhi] = f.id == DesignId::uniform01 ? std::pair{0.0, 1.0} : std::pair{-12.0, 12.0};
  c.Em_X = simpson([&](double x) { return m(x) * x * f(x); }, flo, fhi, 200000);
  for (double v : {c.I_var, c.I_bias, c.I_fpp, c.C1, c.A1, c.Em_X})
    require(std::isfinite(v), ErrorCategory::data, "theory: non-finite constant");
  return c;
}

/// Four-term expansion of MISE_r(h): variance, squared bias, and the two
/// long-memory terms C1^2 n^{-alpha} and C1^2 h^2 kappa2 n^{-alpha} int (f''/f) r.
inline double mise_theory(double h, std::size_t n, double alpha, const TheoryConstants& c, const KernelSpec& k) {
  const double nd = static_cast<double>(n);
  const double lrd = c.C1 * c.C1 * std::pow(nd, -alpha);
  return k.kappa1 / (nd * h) * c.I_var * c.error_variance + std::pow(h, 4) * k.kappa2 * k.kappa2 / 4.0 * c.I_bias +
         lrd + lrd * h * h * k.kappa2 * c.I_fpp;
}

/// Bias scaling in the MISE* expansion: `half` uses h^4/2 (the form printed
/// for the shape estimator); `kappa2_squared_quarter` uses h^4 kappa2^2/4 as
/// in the MISE expansion.
enum class ShapeBiasScaling { half, kappa2_squared_quarter };

inline double mise_star_theory(double h, std::size_t n, double alpha_X, const TheoryConstants& c, const KernelSpec& k,
                               ShapeBiasScaling scaling = ShapeBiasScaling::half) {
  const double nd = static_cast<double>(n);
  const double bias_factor = scaling == ShapeBiasScaling::half ? 0.5 : k.kappa2 * k.kappa2 / 4.0;
  return k.kappa1 / (nd * h) * c.I_var * c.error_variance + std::pow(h, 4) * bias_factor * c.I_bias +
         c.A1 * c.A1 * c.Em_X * c.Em_X * std::pow(nd, -alpha_X);
}

// ---------------------------------------------------------------------------
// Minimization

struct GridMinimum {
  double h_min = 0.0;
  std::size_t index = 0;
  bool at_boundary = false;
};

/// Argmin over an h grid; ties go to the smaller h, boundary minima are flagged.
inline GridMinimum minimize_over_grid(std::span<const double> values, std::span<const double> h_grid) {
  require(values.size() == h_grid.size(), ErrorCategory::data, "minimize_over_grid: misaligned arrays");
  require(values.size() >= 5, ErrorCategory::data, "minimize_over_grid: need at least 5 grid points");
  for (double v : values) require(!std::isnan(v), ErrorCategory::data, "minimize_over_grid: NaN value");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best] || (values[i] == values[best] && h_grid[i] < h_grid[best])) best = i;
  }
  const auto [lo, hi] = std::minmax_element(h_grid.begin(), h_grid.end());
  GridMinimum out;
  out.index = best;
  out.h_min = h_grid[best];
  out.at_boundary = h_grid[best] == *lo || h_grid[best] == *hi;
  return out;
}

struct BandwidthOptimum {
  double h = 0.0;
  std::string regime;  // closed-form exponent label
  int widenings = 0;
};

inline std::string h_opt_regime(double alpha) {
  if (alpha > 0.4) return "n^{-1/5}";
  if (alpha < 0.4) return "n^{-(1-alpha)/3}";
  return "n^{-1/5} = n^{-(1-alpha)/3}";
}

/// Minimizes a risk curve over h > 0: log grid scan, widening the bracket up
/// to three times when the minimum sits on an edge, then golden-section
/// refinement in log h to 0.5% relative precision or better.
inline double minimize_bandwidth(const std::function<double(double)>& risk, double lo, double hi, int* widenings) {
  int wid = 0;
  for (;;) {
    const auto grid = logspace(lo, hi, 161);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = risk(grid[i]);
    const auto gm = minimize_over_grid(vals, grid);
    if (!gm.at_boundary) {
      double a = std::log(grid[gm.index - 1]), b = std::log(grid[gm.index + 1]);
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
      double f1 = risk(std::exp(x1)), f2 = risk(std::exp(x2));
      while (b - a > 1e-5) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - phi * (b - a);
          f1 = risk(std::exp(x1));
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + phi * (b - a);
          f2 = risk(std::exp(x2));
        }
      }
      if (widenings) *widenings = wid;
      return std::exp(0.5 * (a + b));
    }
    if (++wid > 3) fail(ErrorCategory::data, "bandwidth minimizer stuck at the grid boundary after 3 widenings");
    lo /= 100.0;
    hi *= 100.0;
  }
}

inline BandwidthOptimum h_opt_theory(std::size_t n, double alpha, const TheoryConstants& c, const KernelSpec& k) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorCategory::domain, "h_opt_theory: alpha must lie in (0,1]");
  BandwidthOptimum out;
  out.regime = h_opt_regime(alpha);
  out.h = minimize_bandwidth([&](double h) { return mise_theory(h, n, alpha, c, k); }, 1e-3, 10.0, &out.widenings);
  return out;
}

inline BandwidthOptimum h_opt_star_theory(std::size_t n, double alpha_X, const TheoryConstants& c,
                                          const KernelSpec& k, ShapeBiasScaling scaling = ShapeBiasScaling::half) {
  BandwidthOptimum out;
  out.regime = "n^{-1/5}";
  out.h = minimize_bandwidth([&](double h) { return mise_star_theory(h, n, alpha_X, c, k, scaling); }, 1e-3, 10.0,
                             &out.widenings);
  return out;
}

// ---------------------------------------------------------------------------
// CV decomposition

struct CvDecomposition {
  double residual = 0.0;     // CV(h) - MISE_theory(h) - mean_eps_sq
  double cross_term = 0.0;   // n^{-2} sum_{j != j'} eps_j eps_j'
  double mean_eps_sq = 0.0;  // n^{-1} sum eps_i^2 over the trimming region
  double cv = 0.0;
};

inline CvDecomposition cv_decomposition_diagnostic(const RegressionSample& sample, const SortedSample& sorted,
                                                   const KernelSpec& k, double h, double mise_at_h, std::size_t l = 0,
                                                   const Region& region = {}) {
  require(sample.synthetic(), ErrorCategory::unsupported, "cv_decomposition_diagnostic: needs synthetic errors");
  const double nd = static_cast<double>(sample.size());
  CvDecomposition out;
  double sum = 0.0, sum_sq = 0.0, trimmed_sq = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double e = sample.eps[i];
    sum += e;
    sum_sq += e * e;
    if (region.contains(sample.x[i])) trimmed_sq += e * e;
  }
  out.cross_term = (sum * sum - sum_sq) / (nd * nd);
  out.mean_eps_sq = trimmed_sq / nd;
  out.cv = cv_criterion(sample, sorted, k, h, l, region).value;
  out.residual = out.cv - mise_at_h - out.mean_eps_sq;
  return out;
}

inline CvDecomposition cv_decomposition_diagnostic(const RegressionSample& sample, const KernelSpec& k, double h,
                                                   double mise_at_h, std::size_t l = 0, const Region& region = {}) {
  validate(sample);
  return cv_decomposition_diagnostic(sample, SortedSample(sample), k, h, mise_at_h, l, region);
}

// ---------------------------------------------------------------------------
// Report

struct RiskReport {
  std::vector<double> h_grid, ase, ise, cv, mise_theory, mise_star_theory;
  double h_ase_min = 0.0, h_cv_min = 0.0, h_opt_theory = 0.0;
  bool widen_grid = false;  // some minimum sat on the grid edge
  double cross_term = 0.0, mean_eps_sq = 0.0;
};

struct RiskSettings {
  KernelSpec kernel;
  std::size_t cv_leave_out = 0;
  Region trim;
  std::vector<double> eval_grid;
  std::vector<double> eval_weight;  // r at the evaluation grid
  double alpha = 1.0, alpha_X = 1.0;
  TheoryConstants constants;
};

/// Default bandwidth grid: 25 log-spaced points over [h/5, 5h].
inline std::vector<double> default_h_grid(double h_center, std::size_t points = 25, double span = 5.0) {
  return logspace(h_center / span, h_center * span, points);
}

inline RiskReport risk_report(const RegressionSample& sample, const RiskSettings& s, std::span<const double> h_grid) {
  validate(sample);
  const auto truth = sample.truth();
  require(truth.has_value(), ErrorCategory::unsupported, "risk_report: sample carries no true regression function");
  const SortedSample sorted(sample);
  const std::size_t n = sample.size();
  std::vector<double> target(s.eval_grid.size());
  for (std::size_t g = 0; g < target.size(); ++g) target[g] = (*truth)(s.eval_grid[g]);

  RiskReport r;
  r.h_grid.assign(h_grid.begin(), h_grid.end());
  for (double h : h_grid) {
    r.ase.push_back(ase(sample, sorted, s.kernel, h, s.trim).value);
    r.cv.push_back(cv_criterion(sample, sorted, s.kernel, h, s.cv_leave_out, s.trim).value);
    r.ise.push_back(integrated_squared_error(nw_estimate(sorted, s.kernel, h, s.eval_grid), target, s.eval_weight));
    r.mise_theory.push_back(mise_theory(h, n, s.alpha, s.constants, s.kernel));
    r.mise_star_theory.push_back(mise_star_theory(h, n, s.alpha_X, s.constants, s.kernel));
  }
  const auto ga = minimize_over_grid(r.ase, r.h_grid);
  const auto gc = minimize_over_grid(r.cv, r.h_grid);
  const auto gt = minimize_over_grid(r.mise_theory, r.h_grid);
  r.h_ase_min = ga.h_min;
  r.h_cv_min = gc.h_min;
  r.h_opt_theory = gt.h_min;
  r.widen_grid = ga.at_boundary || gc.at_boundary || gt.at_boundary;
  if (sample.synthetic()) {
    const auto dec = cv_decomposition_diagnostic(sample, sorted, s.kernel, r.h_opt_theory,
                                                 r.mise_theory[gt.index], s.cv_leave_out, s.trim);
    r.cross_term = dec.cross_term;
    r.mean_eps_sq = dec.mean_eps_sq;
  }
  return r;
}

}  // namespace lrdreg
