#pragma once

// Trend diagnostics for the negligibility and bandwidth conditions. Each
// statistic is evaluated on a ladder of sample sizes and classified by the
// fitted log-log exponent.

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrdreg/error.hpp"
#include "lrdreg/innovations.hpp"
#include "lrdreg/numeric.hpp"
#include "lrdreg/parallel.hpp"
#include "lrdreg/processes.hpp"
#include "lrdreg/scaling.hpp"

namespace lrdreg {

enum class ConditionId { A, B1, B2, C1, C2, C6, var_linear };

inline std::string_view to_string(ConditionId c) {
  switch (c) {
    case ConditionId::A: return "A";
    case ConditionId::B1: return "B1";
    case ConditionId::B2: return "B2";
    case ConditionId::C1: return "C1";
    case ConditionId::C2: return "C2";
    case ConditionId::C6: return "C6";
    case ConditionId::var_linear: return "varO(n)";
  }
  return "?";
}

inline ConditionId parse_condition_id(std::string_view s) {
  for (auto c : {ConditionId::A, ConditionId::B1, ConditionId::B2, ConditionId::C1, ConditionId::C2, ConditionId::C6,
                 ConditionId::var_linear})
    if (to_string(c) == s) return c;
  fail(ErrorCategory::data, "unknown condition id '" + std::string(s) + "'");
}

enum class Verdict { tends_to_zero, bounded, diverges };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::tends_to_zero: return "tends-to-zero";
    case Verdict::bounded: return "bounded";
    case Verdict::diverges: return "diverges";
  }
  return "?";
}

inline Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::tends_to_zero, Verdict::bounded, Verdict::diverges})
    if (to_string(v) == s) return v;
  fail(ErrorCategory::data, "unknown verdict '" + std::string(s) + "'");
}

inline Verdict classify_exponent(double exponent, double tolerance) {
  if (exponent < -tolerance) return Verdict::tends_to_zero;
  if (exponent > tolerance) return Verdict::diverges;
  return Verdict::bounded;
}

struct ConditionVerdict {
  ConditionId id = ConditionId::A;
  std::vector<double> n_values;
  std::vector<double> statistic_values;
  double exponent = 0.0;
  Verdict verdict = Verdict::bounded;
  double tolerance = 0.0;
};

/// Bandwidth rule h(n) = scale * n^{-beta}.
struct BandwidthRule {
  double scale = 1.0;
  double beta = 0.2;
  double operator()(double n) const { return scale * std::pow(n, -beta); }
};

inline constexpr double monte_carlo_exponent_tolerance = 0.1;
inline constexpr double analytic_exponent_tolerance = 1e-12;

inline std::vector<std::size_t> default_n_ladder() { return {256, 512, 1024, 2048, 4096, 8192}; }

// ---------------------------------------------------------------------------
// Analytic checks

/// Power-law statistic h^p n^{1 - a}: exact exponent 1 - a - p beta.
inline ConditionVerdict power_condition(ConditionId id, double a, int p, const BandwidthRule& rule,
                                        std::span<const std::size_t> ladder) {
  ConditionVerdict v;
  v.id = id;
  v.tolerance = analytic_exponent_tolerance;
  v.exponent = (1.0 - a) - p * rule.beta;
  for (std::size_t n : ladder) {
    const double nd = static_cast<double>(n);
    v.n_values.push_back(nd);
    v.statistic_values.push_back(std::pow(rule(nd), p) * std::pow(nd, 1.0 - a));
  }
  v.verdict = classify_exponent(v.exponent, v.tolerance);
  return v;
}

/// Deterministic verdicts for the bandwidth-type conditions, assuming linear
/// errors with memory alpha and predictors with memory alpha_X:
///   B1: h n^{1-alpha}, B2: h^5 n^{1-alpha}, C1: h^5 n^{1-alpha_X},
///   C2: h n^{1-alpha_X}, C6: sqrt(nh) n^{-alpha_X/2} n^{-alpha/2}.
inline std::vector<ConditionVerdict> check_bandwidth_conditions(double alpha, double alpha_X, const BandwidthRule& rule,
                                                                std::span<const std::size_t> ladder) {
  require(alpha > 0.0 && alpha <= 1.0 && alpha_X > 0.0 && alpha_X <= 1.0, ErrorCategory::domain,
          "check_bandwidth_conditions: memory exponents must lie in (0,1]");
  std::vector<ConditionVerdict> out;
  out.push_back(power_condition(ConditionId::B1, alpha, 1, rule, ladder));
  out.push_back(power_condition(ConditionId::B2, alpha, 5, rule, ladder));
  out.push_back(power_condition(ConditionId::C1, alpha_X, 5, rule, ladder));
  out.push_back(power_condition(ConditionId::C2, alpha_X, 1, rule, ladder));

  ConditionVerdict c6;
  c6.id = ConditionId::C6;
  c6.tolerance = analytic_exponent_tolerance;
  c6.exponent = (1.0 - rule.beta - alpha - alpha_X) / 2.0;
  for (std::size_t n : ladder) {
    const double nd = static_cast<double>(n);
    c6.n_values.push_back(nd);
    c6.statistic_values.push_back(std::sqrt(nd * rule(nd)) * std::pow(nd, -(alpha + alpha_X) / 2.0));
  }
  c6.verdict = classify_exponent(c6.exponent, c6.tolerance);
  out.push_back(std::move(c6));
  return out;
}

inline std::vector<ConditionVerdict> check_bandwidth_conditions(double alpha, double alpha_X, const BandwidthRule& rule) {
  const auto ladder = default_n_ladder();
  return check_bandwidth_conditions(alpha, alpha_X, rule, ladder);
}

// ---------------------------------------------------------------------------
// Monte Carlo checks

inline void require_decomposable(const ProcessSpec& s) {
  const bool ok = s.family != ProcessFamily::functional_of_linear ||
                  s.params.functional == Functional::square_centered;
  require(ok, ErrorCategory::unsupported, "condition check: family has no closed-form conditional mean");
}

/// Realized sums of E[eps_i | H_{i-1}] - eps_i, one per replicate. Replicate
/// r uses the same stream at every n, so the ladder is a set of nested paths.
inline std::vector<double> martingale_gap_sums(const ProcessSpec& spec, std::size_t n, std::size_t reps,
                                               std::uint64_t seed, std::size_t workers) {
  return parallel_map(reps, workers, [&](std::size_t r) {
    ProcessSpec s = spec;
    s.innovation.seed = split_seed(seed, r);
    const auto path = conditional_path(s, n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += path.cond_mean[i] - path.eps[i];
    return acc;
  });
}

/// Condition (A): (sqrt(nh)/n) |sum (E[eps_i|H_{i-1}] - eps_i)| averaged over replicates.
inline ConditionVerdict check_negligibility_A(const ProcessSpec& spec, std::span<const std::size_t> ladder,
                                              const BandwidthRule& rule, std::size_t reps, std::uint64_t seed,
                                              std::size_t workers = 0) {
  require_decomposable(spec);
  require(reps >= 1 && ladder.size() >= 2, ErrorCategory::config, "check_negligibility_A: need reps and a ladder");
  ConditionVerdict v;
  v.id = ConditionId::A;
  v.tolerance = monte_carlo_exponent_tolerance;
  for (std::size_t n : ladder) {
    const double nd = static_cast<double>(n);
    const auto sums = martingale_gap_sums(spec, n, reps, seed, workers);
    double acc = 0.0;
    for (double s : sums) acc += std::abs(s);
    v.n_values.push_back(nd);
    v.statistic_values.push_back(std::sqrt(nd * rule(nd)) / nd * acc / static_cast<double>(reps));
  }
  v.exponent = fit_log_log(v.n_values, v.statistic_values).slope;
  v.verdict = classify_exponent(v.exponent, v.tolerance);
  return v;
}

/// Growth of Var(sum (E[eps_i|H_{i-1}] - eps_i)): the statistic is Var / n, so
/// a linear variance shows up as a flat (bounded) statistic.
inline ConditionVerdict check_var_linear_growth(const ProcessSpec& spec, std::span<const std::size_t> ladder,
                                                std::size_t reps, std::uint64_t seed, std::size_t workers = 0) {
  require_decomposable(spec);
  require(reps >= 2 && ladder.size() >= 2, ErrorCategory::config, "check_var_linear_growth: need reps and a ladder");
  ConditionVerdict v;
  v.id = ConditionId::var_linear;
  v.tolerance = monte_carlo_exponent_tolerance;
  for (std::size_t n : ladder) {
    const auto sums = martingale_gap_sums(spec, n, reps, seed, workers);
    v.n_values.push_back(static_cast<double>(n));
    v.statistic_values.push_back(sample_variance(sums) / static_cast<double>(n));
  }
  v.exponent = fit_log_log(v.n_values, v.statistic_values).slope;
  v.verdict = classify_exponent(v.exponent, v.tolerance);
  return v;
}

}  // namespace lrdreg
