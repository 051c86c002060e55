#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "lrdreg/error.hpp"
#include "lrdreg/numeric.hpp"

namespace lrdreg {

enum class KernelShape { epanechnikov, gaussian_truncated, quartic };

inline std::string_view to_string(KernelShape s) {
  switch (s) {
    case KernelShape::epanechnikov: return "epanechnikov";
    case KernelShape::gaussian_truncated: return "gaussian-truncated";
    case KernelShape::quartic: return "quartic";
  }
  return "?";
}

inline KernelShape parse_kernel_shape(std::string_view s) {
  for (auto k : {KernelShape::epanechnikov, KernelShape::gaussian_truncated, KernelShape::quartic})
    if (to_string(k) == s) return k;
  fail(ErrorCategory::config, "unknown kernel '" + std::string(s) + "'");
}

namespace detail {

// The Gaussian kernel is truncated to [-4, 4] and renormalized.
inline constexpr double gaussian_cut = 4.0;

inline double gaussian_mass() { return std::erf(gaussian_cut / std::numbers::sqrt2); }

inline double gaussian_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace detail

struct KernelMoments {
  double kappa1 = 0.0;  // integral of K^2
  double kappa2 = 0.0;  // integral of u^2 K
};

/// Closed-form moments for each shape.
inline KernelMoments kernel_moments(KernelShape shape) {
  switch (shape) {
    case KernelShape::epanechnikov: return {3.0 / 5.0, 1.0 / 5.0};
    case KernelShape::quartic: return {5.0 / 7.0, 1.0 / 7.0};
    case KernelShape::gaussian_truncated: {
      const double c = detail::gaussian_cut;
      const double z = detail::gaussian_mass();
      // integral of phi^2 over [-c, c] = erf(c) / (2 sqrt(pi))
      const double k1 = std::erf(c) / (2.0 * std::sqrt(std::numbers::pi)) / (z * z);
      // integral of u^2 phi over [-c, c] = z - 2 c phi(c)
      const double k2 = (z - 2.0 * c * detail::gaussian_pdf(c)) / z;
      return {k1, k2};
    }
  }
  return {};
}

/// Symmetric, nonnegative, bounded kernel with compact support [-radius, radius].
struct KernelSpec {
  KernelShape shape = KernelShape::epanechnikov;
  double kappa1 = 3.0 / 5.0;
  double kappa2 = 1.0 / 5.0;

  static KernelSpec make(KernelShape s) {
    const auto m = kernel_moments(s);
    return {s, m.kappa1, m.kappa2};
  }

  double radius() const noexcept { return shape == KernelShape::gaussian_truncated ? detail::gaussian_cut : 1.0; }

  double operator()(double u) const noexcept {
    const double a = std::abs(u);
    switch (shape) {
      case KernelShape::epanechnikov: return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
      case KernelShape::quartic: {
        if (a > 1.0) return 0.0;
        const double t = 1.0 - u * u;
        return 15.0 / 16.0 * t * t;
      }
      case KernelShape::gaussian_truncated:
        return a <= detail::gaussian_cut ? detail::gaussian_pdf(u) / detail::gaussian_mass() : 0.0;
    }
    return 0.0;
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Quadrature of the defining integrals, for checking the stored moments.
struct KernelQuadrature {
  double mass, first_moment, kappa1, kappa2;
};

inline KernelQuadrature kernel_quadrature(const KernelSpec& k, std::size_t panels = 200000) {
  const double r = k.radius();
  return {simpson([&](double u) { return k(u); }, -r, r, panels),
          simpson([&](double u) { return u * k(u); }, -r, r, panels),
          simpson([&](double u) { return k(u) * k(u); }, -r, r, panels),
          simpson([&](double u) { return u * u * k(u); }, -r, r, panels)};
}

}  // namespace lrdreg
