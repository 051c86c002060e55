#pragma once

// Kernel density, Nadaraya-Watson and shape-function estimators.
//
// Estimators work on a SortedSample (predictors sorted once, responses carried
// along) so that compact kernels only visit the points inside the window.
// Summation always runs in sorted order, so results are reproducible
// regardless of how grid points are scheduled.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "lrdreg/error.hpp"
#include "lrdreg/functions.hpp"
#include "lrdreg/kernels.hpp"
#include "lrdreg/numeric.hpp"
#include "lrdreg/processes.hpp"

namespace lrdreg {

/// Relative density floor: a point is flagged when sum_i K((x - X_i)/h) falls
/// below n h times this value, i.e. when the density estimate drops below it.
inline constexpr double density_floor = 1e-3;

/// How a synthetic sample was produced; enough to regenerate it bit-exactly.
struct SampleRecipe {
  ProcessSpec errors;
  PredictorSpec predictors;
  TrueFunctionId function = TrueFunctionId::sin_2pi;
  bool zero_errors = false;

  friend bool operator==(const SampleRecipe&, const SampleRecipe&) = default;
};

struct RegressionSample {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> eps;             // true errors; empty for observed data
  std::optional<SampleRecipe> recipe;  // absent for observed data

  std::size_t size() const noexcept { return x.size(); }
  bool synthetic() const noexcept { return recipe.has_value() && eps.size() == x.size(); }
  std::optional<TrueFunction> truth() const {
    if (!recipe) return std::nullopt;
    return TrueFunction{recipe->function};
  }
};

inline void validate(const RegressionSample& s) {
  require(s.x.size() == s.y.size(), ErrorCategory::data, "sample: x and y lengths differ");
  require(s.x.size() >= 2, ErrorCategory::data, "sample: need at least two observations");
}

/// Builds a sample from x and explicit errors.
inline RegressionSample make_sample(std::vector<double> x, std::vector<double> eps, TrueFunctionId id) {
  require(x.size() == eps.size(), ErrorCategory::data, "make_sample: misaligned arrays");
  RegressionSample s;
  const TrueFunction m{id};
  s.y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s.y[i] = m(x[i]) + eps[i];
  s.x = std::move(x);
  s.eps = std::move(eps);
  s.recipe = SampleRecipe{};
  s.recipe->function = id;
  return s;
}

inline RegressionSample generate_sample(const SampleRecipe& recipe, std::size_t n) {
  auto x = simulate_predictors(recipe.predictors, n);
  std::vector<double> eps = recipe.zero_errors ? std::vector<double>(n, 0.0) : simulate_errors(recipe.errors, n);
  auto s = make_sample(std::move(x), std::move(eps), recipe.function);
  s.recipe = recipe;
  return s;
}

struct Region {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

class SortedSample {
 public:
  SortedSample(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), ErrorCategory::data, "sample: x and y lengths differ");
    require(x.size() >= 1, ErrorCategory::data, "sample: empty");
    const std::size_t n = x.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    xs_.resize(n);
    ys_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      xs_[k] = x[order_[k]];
      ys_[k] = y[order_[k]];
    }
  }
  explicit SortedSample(const RegressionSample& s) : SortedSample(s.x, s.y) {}

  struct Sums {
    double weight = 0.0;      // sum K((x - X_i)/h)
    double weighted_y = 0.0;  // sum Y_i K((x - X_i)/h)
  };

  Sums sums(const KernelSpec& k, double h, double at) const {
    const double reach = k.radius() * h;
    const auto first = std::lower_bound(xs_.begin(), xs_.end(), at - reach);
    const auto last = std::upper_bound(first, xs_.end(), at + reach);
    Sums s;
    for (auto it = first; it != last; ++it) {
      const auto j = static_cast<std::size_t>(it - xs_.begin());
      const double w = k((at - xs_[j]) / h);
      s.weight += w;
      s.weighted_y += w * ys_[j];
    }
    return s;
  }

  std::size_t size() const noexcept { return xs_.size(); }
  std::span<const double> sorted_x() const noexcept { return xs_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<double> xs_, ys_;
};

/// Values on a grid with a per-point flag; flagged points carry 0, never NaN.
struct EstimateGrid {
  std::vector<double> points;
  std::vector<double> values;
  std::vector<char> flagged;
  double bandwidth = 0.0;
  std::size_t flagged_count = 0;
};

/// Equally spaced evaluation grid over the central 98% of the design density.
inline std::vector<double> evaluation_grid(const DesignDensity& f, std::size_t points = 201) {
  const auto [lo, hi] = f.central_support(0.98);
  return linspace(lo, hi, points);
}

inline void require_bandwidth(double h) {
  require(h > 0.0 && std::isfinite(h), ErrorCategory::domain, "bandwidth must be positive and finite");
}

/// f_h(x) = (n h)^{-1} sum K((x - X_i)/h).
inline EstimateGrid density_estimate(std::span<const double> x, const KernelSpec& k, double h,
                                     std::span<const double> grid) {
  require_bandwidth(h);
  require(!x.empty(), ErrorCategory::data, "density_estimate: empty sample");
  const std::vector<double> ones(x.size(), 0.0);
  const SortedSample s(x, ones);
  EstimateGrid out;
  out.points.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  out.flagged.assign(grid.size(), 0);
  out.bandwidth = h;
  const double norm = static_cast<double>(x.size()) * h;
  for (std::size_t g = 0; g < grid.size(); ++g) out.values[g] = s.sums(k, h, grid[g]).weight / norm;
  return out;
}

/// Nadaraya-Watson estimate at a single abscissa; nullopt when below the density floor.
inline std::optional<double> nw_at(const SortedSample& s, const KernelSpec& k, double h, double at) {
  const auto sums = s.sums(k, h, at);
  if (sums.weight < static_cast<double>(s.size()) * h * density_floor) return std::nullopt;
  return sums.weighted_y / sums.weight;
}

inline EstimateGrid nw_estimate(const SortedSample& s, const KernelSpec& k, double h, std::span<const double> grid) {
  require_bandwidth(h);
  EstimateGrid out;
  out.points.assign(grid.begin(), grid.end());
  out.values.assign(grid.size(), 0.0);
  out.flagged.assign(grid.size(), 0);
  out.bandwidth = h;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (const auto v = nw_at(s, k, h, grid[g])) {
      out.values[g] = *v;
    } else {
      out.flagged[g] = 1;
      ++out.flagged_count;
    }
  }
  return out;
}

inline EstimateGrid nw_estimate(const RegressionSample& sample, const KernelSpec& k, double h,
                                std::span<const double> grid) {
  validate(sample);
  return nw_estimate(SortedSample(sample), k, h, grid);
}

/// m*_h(x) = m_h(x) - mean(Y); flagged points stay flagged with value 0.
inline EstimateGrid shape_from_nw(EstimateGrid nw, double response_mean) {
  for (std::size_t g = 0; g < nw.values.size(); ++g)
    if (!nw.flagged[g]) nw.values[g] -= response_mean;
  return nw;
}

inline EstimateGrid shape_estimate(const RegressionSample& sample, const KernelSpec& k, double h,
                                   std::span<const double> grid) {
  return shape_from_nw(nw_estimate(sample, k, h, grid), mean(sample.y));
}

/// Leading bias term h^2 kappa2 rho(x) / (2 f(x)) with rho = m'' f + 2 m' f'.
inline double bias_approx(const TrueFunction& m, const DesignDensity& f, const KernelSpec& k, double h, double x) {
  const double fx = f(x);
  require(fx > 1e-8, ErrorCategory::domain, "bias_approx: density below floor at x");
  const double rho = m.d2(x) * fx + 2.0 * m.d1(x) * f.d1(x);
  return h * h * k.kappa2 * rho / (2.0 * fx);
}

/// The alternative expression h^2 kappa2 (m''/2 + m' f''/f). Kept for comparison
/// only; it disagrees with the rho form whenever m' f' != m' f''.
inline double bias_approx_alternative(const TrueFunction& m, const DesignDensity& f, const KernelSpec& k, double h,
                                      double x) {
  const double fx = f(x);
  require(fx > 1e-8, ErrorCategory::domain, "bias_approx: density below floor at x");
  return h * h * k.kappa2 * (m.d2(x) / 2.0 + m.d1(x) * f.d2(x) / fx);
}

}  // namespace lrdreg
