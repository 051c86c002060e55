#pragma once

// Registered regression functions and design densities with analytic
// derivatives, used by the bias formula and the theoretical risk constants.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "lrdreg/error.hpp"

namespace lrdreg {

enum class TrueFunctionId { sin_2pi, linear, square, constant, cubic };

inline std::string_view to_string(TrueFunctionId id) {
  switch (id) {
    case TrueFunctionId::sin_2pi: return "sin-2pi";
    case TrueFunctionId::linear: return "linear";
    case TrueFunctionId::square: return "square";
    case TrueFunctionId::constant: return "constant";
    case TrueFunctionId::cubic: return "cubic";
  }
  return "?";
}

inline TrueFunctionId parse_true_function(std::string_view s) {
  for (auto id : {TrueFunctionId::sin_2pi, TrueFunctionId::linear, TrueFunctionId::square, TrueFunctionId::constant,
                  TrueFunctionId::cubic})
    if (to_string(id) == s) return id;
  fail(ErrorCategory::config, "unknown true function '" + std::string(s) + "'");
}

/// m(x) with its first two derivatives. `constant` is m = 1.
struct TrueFunction {
  TrueFunctionId id = TrueFunctionId::sin_2pi;

  double value(double x) const noexcept {
    constexpr double w = 2.0 * std::numbers::pi;
    switch (id) {
      case TrueFunctionId::sin_2pi: return std::sin(w * x);
      case TrueFunctionId::linear: return x;
      case TrueFunctionId::square: return x * x;
      case TrueFunctionId::constant: return 1.0;
      case TrueFunctionId::cubic: return x * x * x;
    }
    return 0.0;
  }
  double d1(double x) const noexcept {
    constexpr double w = 2.0 * std::numbers::pi;
    switch (id) {
      case TrueFunctionId::sin_2pi: return w * std::cos(w * x);
      case TrueFunctionId::linear: return 1.0;
      case TrueFunctionId::square: return 2.0 * x;
      case TrueFunctionId::constant: return 0.0;
      case TrueFunctionId::cubic: return 3.0 * x * x;
    }
    return 0.0;
  }
  double d2(double x) const noexcept {
    constexpr double w = 2.0 * std::numbers::pi;
    switch (id) {
      case TrueFunctionId::sin_2pi: return -w * w * std::sin(w * x);
      case TrueFunctionId::linear: return 0.0;
      case TrueFunctionId::square: return 2.0;
      case TrueFunctionId::constant: return 0.0;
      case TrueFunctionId::cubic: return 6.0 * x;
    }
    return 0.0;
  }
  double operator()(double x) const noexcept { return value(x); }
};

enum class DesignId { standard_normal, uniform01 };

inline std::string_view to_string(DesignId id) {
  return id == DesignId::standard_normal ? "standard-normal" : "uniform01";
}

/// Predictor density f with derivatives and quantiles. Derivatives of the
/// uniform density are taken as zero on the open support.
struct DesignDensity {
  DesignId id = DesignId::standard_normal;

  double value(double x) const noexcept {
    if (id == DesignId::uniform01) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  double d1(double x) const noexcept { return id == DesignId::uniform01 ? 0.0 : -x * value(x); }
  double d2(double x) const noexcept { return id == DesignId::uniform01 ? 0.0 : (x * x - 1.0) * value(x); }
  double operator()(double x) const noexcept { return value(x); }

  double quantile(double p) const {
    require(p > 0.0 && p < 1.0, ErrorCategory::domain, "quantile: p must lie in (0,1)");
    if (id == DesignId::uniform01) return p;
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
  }

  /// Central region carrying `mass` of the distribution.
  std::pair<double, double> central_support(double mass = 0.98) const {
    const double tail = (1.0 - mass) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
  }
};

}  // namespace lrdreg
