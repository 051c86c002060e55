#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lrdreg/processes.hpp"
#include "lrdreg/scaling.hpp"

using namespace lrdreg;

namespace {

InnovationSpec gauss(std::uint64_t seed) { return {InnovationLaw::standard_gaussian, seed}; }

// Monte Carlo Var(sum eps_i) at each n, over `reps` seeds. Each replicate
// uses one stream for the whole ladder, so the paths are nested.
std::vector<double> mc_partial_sum_variance(ProcessSpec spec, const std::vector<std::size_t>& ladder,
                                            std::size_t reps) {
  const std::size_t n_max = ladder.back();
  std::vector<std::vector<double>> sums(ladder.size());
  for (std::size_t r = 0; r < reps; ++r) {
    spec.innovation.seed = split_seed(1234, r);
    const auto eps = simulate_errors(spec, n_max);
    double s = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n_max; ++i) {
      s += eps[i];
      if (i + 1 == ladder[j]) sums[j++].push_back(s);
    }
  }
  std::vector<double> out;
  for (const auto& v : sums) out.push_back(sample_variance(v));
  return out;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Linear, IdentityFilterReturnsInnovations) {
  const CoefficientSequence one{{1.0}, 1.0};
  const auto eps = simulate_linear(one, gauss(3), 100, 0);
  EXPECT_EQ(eps, draw_innovations(gauss(3), 100));
}

TEST(Linear, TwoTapFilterOnConstantInput) {
  const std::vector<double> eta(11, 1.0);
  const auto out = filter_linear(std::vector<double>{1.0, 1.0}, eta, 10);
  for (double v : out) EXPECT_EQ(v, 2.0);
}

TEST(Linear, InsufficientBurnInIsConfigError) {
  const auto c = linear_lrd_coeffs(0.4, 100);
  try {
    simulate_linear(c, gauss(1), 10, 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

TEST(Linear, UnitVarianceAcrossSeeds) {
  // Single long-memory paths scatter widely, so the band applies to the average over seeds.
  // Centering at the sample mean removes Var(mean), which the oracle accounts for.
  const std::size_t n = 4096;
  const auto c = linear_lrd_coeffs(0.4, 5000);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) total += sample_variance(simulate_linear(c, gauss(seed), n, 5000));
  const double avg = total / 50.0;
  const double nd = static_cast<double>(n);
  const double expected = (nd * c.sum_of_squares() - partial_sum_variance_oracle(c, n) / nd) / (nd - 1.0);
  EXPECT_NEAR(avg, 1.0, 0.15);
  EXPECT_NEAR(avg, expected, 0.06);
}

TEST(Linear, DeterministicInSpec) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.5, gauss(9));
  EXPECT_EQ(simulate_errors(s, 300), simulate_errors(s, 300));
  s.innovation.seed = 10;
  EXPECT_NE(simulate_errors(s, 300), simulate_errors(ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.5, gauss(9)), 300));
}

TEST(Linear, OracleSlopeForSeveralAlphas) {
  const std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096, 8192};
  const auto n = as_doubles(ladder);
  for (double alpha : {0.2, 0.4, 0.6, 0.8}) {
    const auto f = partial_sum_variance_ladder(farima_coeffs((1.0 - alpha) / 2.0, 1 << 18), ladder);
    EXPECT_NEAR(fit_log_log(n, f).slope, 2.0 - alpha, 0.05) << "alpha " << alpha;

    // The pure power-law filter approaches its asymptotic slope slowly; local slopes decrease in n.
    const auto v = partial_sum_variance_ladder(linear_lrd_coeffs(alpha, 1 << 18), ladder);
    EXPECT_NEAR(fit_log_log(n, v).slope, 2.0 - alpha, 0.15) << "alpha " << alpha;
    for (std::size_t j = 2; j < ladder.size(); ++j)
      EXPECT_LT(std::log(v[j] / v[j - 1]), std::log(v[j - 1] / v[j - 2])) << "alpha " << alpha << " n " << ladder[j];
  }
}

TEST(Linear, MonteCarloMatchesOracle) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.6);
  s.truncation_K = 5000;
  const auto mc = mc_partial_sum_variance(s, {1024}, 400);
  const double oracle = partial_sum_variance_oracle(linear_lrd_coeffs(0.6, 5000), 1024);
  EXPECT_NEAR(mc[0] / oracle, 1.0, 0.15);
}

TEST(Decomposition, IdentityHoldsExactly) {
  for (auto family : {ProcessFamily::linear_lrd, ProcessFamily::farima}) {
    const auto s = ProcessSpec::with_alpha(family, 0.4, gauss(5));
    const auto run = conditional_mean_decomposition(s, 1000);
    for (std::size_t i = 0; i < 1000; ++i)
      EXPECT_LT(std::abs(run.eps[i] - run.eps_pred[i] - run.c0 * run.eta[i]), 1e-12);
  }
  const auto farima = conditional_mean_decomposition(ProcessSpec::with_d(ProcessFamily::farima, 0.2, gauss(5)), 100);
  EXPECT_EQ(farima.c0, 1.0);
}

TEST(Decomposition, IidHasNoPredictablePart) {
  const CoefficientSequence one{{1.0}, 1.0};
  const auto run = run_linear(one, gauss(2), 50, 0);
  for (double v : run.eps_pred) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(run.eps, run.eta);
}

TEST(Decomposition, PredictableShareApproachesOne) {
  const auto c = linear_lrd_coeffs(0.4, 1 << 16);
  const double share = partial_sum_variance_oracle(predictable_part(c), 4096) / partial_sum_variance_oracle(c, 4096);
  EXPECT_NEAR(share, 1.0, 0.1);
}

TEST(Decomposition, UnsupportedFamily) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::larch, 0.4, gauss(1));
  try {
    conditional_mean_decomposition(s, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::unsupported);
  }
}

TEST(Functional, SquareOnIidBaseIsCentered) {
  auto s = ProcessSpec::with_d(ProcessFamily::functional_of_linear, 0.0, gauss(17));
  s.params.base = ProcessFamily::farima;
  const std::size_t n = 20000;
  const auto eps = simulate_errors(s, n);
  EXPECT_NEAR(mean(eps), 0.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Functional, ZeroSequenceGivesMinusCentering) {
  const std::vector<double> zeros(5, 0.0);
  for (double v : center_functional(Functional::square_centered, 1.0, 1.7, zeros)) EXPECT_EQ(v, -1.7);
}

TEST(Functional, ConditionalMeanIdentity) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6, gauss(23));
  s.truncation_K = 2000;
  const auto path = conditional_path(s, 500);
  auto base = s;
  base.family = ProcessFamily::linear_lrd;
  const auto run = conditional_mean_decomposition(base, 500);
  for (std::size_t i = 0; i < 500; ++i) {
    const double lhs = path.cond_mean[i] - path.eps[i];
    const double c0 = run.c0, eta = run.eta[i], p = run.eps_pred[i];
    const double rhs = c0 * c0 * (1.0 - eta * eta) - 2.0 * c0 * eta * p;
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(Functional, SquarePartialSumsGrowLinearly) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6);
  s.truncation_K = 4096;
  const std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096};
  // Gaussian base: Cov(X_0^2, X_k^2) = 2 gamma(k)^2, which gives the exact variance.
  // Its slope over this ladder still carries a slowly decaying excess above 1.
  const auto gamma = autocovariances(linear_lrd_coeffs(0.6, 4096).values, ladder.back());
  std::vector<double> g2(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) g2[k] = 2.0 * gamma[k] * gamma[k];
  std::vector<double> oracle;
  for (std::size_t m : ladder) oracle.push_back(partial_sum_variance(g2, m));
  const double exact = fit_log_log(as_doubles(ladder), oracle).slope;
  EXPECT_NEAR(exact, 1.0, 0.15);
  const auto v = mc_partial_sum_variance(s, ladder, 1000);
  EXPECT_NEAR(fit_log_log(as_doubles(ladder), v).slope, exact, 0.1);
  EXPECT_NEAR(v.back() / oracle.back(), 1.0, 0.2);
}

TEST(Functional, AbsPowerNeedsGaussianInnovations) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6, {InnovationLaw::centered_uniform, 1});
  s.params.functional = Functional::abs_power_centered;
  s.truncation_K = 10;
  try {
    simulate_errors(s, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

TEST(Functional, AbsPowerCenteringIsFrozen) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6, gauss(1));
  s.params.functional = Functional::abs_power_centered;
  s.params.delta = 1.0;
  s.truncation_K = 100;
  const auto frozen = freeze_centering(s, 100);
  // E|N(0,1)| = sqrt(2 / pi).
  EXPECT_NEAR(frozen.params.functional_mean, std::sqrt(2.0 / std::numbers::pi), 3e-3);
  EXPECT_EQ(freeze_centering(s, 100).params.functional_mean, frozen.params.functional_mean);
}

TEST(Garch, DegenerateEqualsFarima) {
  GarchParams g;  // a0 = 1, no ARCH or GARCH terms
  const auto a = simulate_farima_garch(0.3, g, gauss(4), 200, 500, 500);
  const auto b = simulate_linear(farima_coeffs(0.3, 500), gauss(4), 200, 500);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Garch, StationaryInnovationVariance) {
  const GarchParams g{0.1, {0.1}, {0.8}};
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto eta = garch_innovations(g, gauss(seed), 0, 4096, 2000);
    total += sample_variance(eta);
  }
  EXPECT_NEAR(total / 50.0, 1.0, 0.2);
}

TEST(Garch, BurnInForgetting) {
  const GarchParams g{0.1, {0.1}, {0.8}};
  const auto a = garch_innovations(g, gauss(8), 0, 1, 400);
  const auto b = garch_innovations(g, gauss(8), 0, 1, 800);
  EXPECT_LT(std::abs(a[0] - b[0]), 1e-6);
}

TEST(Garch, NonstationaryIsConfigError) {
  const GarchParams g{0.1, {0.5}, {0.6}};
  try {
    simulate_farima_garch(0.2, g, gauss(1), 10, 10, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
  }
}

TEST(Garch, AntipersistentOracleSlope) {
  const auto c = farima_coeffs(-0.3, 1 << 16);
  const std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096, 8192};
  const double slope = fit_log_log(as_doubles(ladder), partial_sum_variance_ladder(c, ladder)).slope;
  EXPECT_LT(slope, 1.0);
  EXPECT_LE(slope, 0.55);
}

TEST(StochasticVolatility, ZeroMultipliersGiveZeroOutput) {
  const auto run = combine_volatility({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  for (double v : run.eps) EXPECT_EQ(v, 0.0);
}

TEST(StochasticVolatility, PartialSumsGrowLinearly) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::stochastic_volatility, 0.2);
  s.truncation_K = 4096;
  const std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096};
  const auto v = mc_partial_sum_variance(s, ladder, 300);
  EXPECT_NEAR(fit_log_log(as_doubles(ladder), v).slope, 1.0, 0.15);
}

TEST(StochasticVolatility, Uncorrelated) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::stochastic_volatility, 0.2, gauss(31));
  const std::size_t n = 20000;
  const auto eps = simulate_errors(s, n);
  const double rho = sample_autocovariance(eps, 1) / sample_autocovariance(eps, 0);
  EXPECT_LT(std::abs(rho), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Larch, NoFeedbackScalesMultipliers) {
  const auto b = larch_coeffs(0.4, 0.0, 50);
  const auto run = run_larch(b, 1.5, gauss(6), 100, 50);
  const auto z = draw_innovations(gauss(6), 100);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_DOUBLE_EQ(run.eps[i], 1.5 * z[i]);
}

TEST(Larch, StationarySecondMoment) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::larch, 0.4);
  s.params.level = 1.0;
  s.params.scale = 0.5;
  s.truncation_K = 2000;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    s.innovation.seed = seed;
    total += sample_variance(simulate_errors(s, 4096));
  }
  EXPECT_NEAR(total / 50.0, 2.0, 0.3);
}

TEST(Larch, BurnInSensitivity) {
  const auto b = larch_coeffs(0.4, 0.5, 2000);
  const auto a = run_larch(b, 1.0, gauss(12), 1, 2000);
  const auto c = run_larch(b, 1.0, gauss(12), 1, 4000);
  EXPECT_LT(std::abs(a.eps[0] - c.eps[0]), 1e-6);
}

TEST(Larch, NonstationaryIsRejected) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::larch, 0.4, gauss(1));
  s.params.scale = 1.0;
  try {
    simulate_errors(s, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::stationarity);
  }
}

TEST(Predictors, IidModeIsWhite) {
  const std::size_t n = 100000;
  const auto x = simulate_predictors({PredictorMode::iid_gaussian, 1.0, 1.0, gauss(2)}, n);
  EXPECT_LT(std::abs(sample_autocovariance(x, 1) / sample_autocovariance(x, 0)), 4.0 / std::sqrt(1e5));
  EXPECT_EQ(x, draw_innovations(gauss(2), n));
}

TEST(Predictors, LrdAutocovarianceMatchesOracle) {
  const std::size_t n = 4096, K = 5000;
  const auto a = predictor_coeffs(0.4, 1.0, K);
  const auto gamma = autocovariances(a.values, 20);
  std::vector<double> mc(21, 0.0);
  const std::size_t reps = 100;
  for (std::uint64_t seed = 0; seed < reps; ++seed) {
    const auto x = simulate_predictors({PredictorMode::lrd_gaussian, 0.4, 1.0, gauss(seed), K, K}, n);
    const double m = mean(x);
    for (std::size_t k = 0; k <= 20; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - m) * (x[i + k] - m);
      mc[k] += s / static_cast<double>(n) / reps;
    }
  }
  // The sample mean absorbs part of the long-memory covariance; add back
  // its expected effect, Var(mean), before comparing.
  const double var_mean = partial_sum_variance_oracle(a, n) / (static_cast<double>(n) * n);
  for (std::size_t k = 0; k <= 20; ++k) EXPECT_NEAR(mc[k] + var_mean, gamma[k], 0.05) << "lag " << k;
}

TEST(Predictors, UnitVarianceAcrossSeeds) {
  const std::size_t n = 4096;
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    total += sample_variance(simulate_predictors({PredictorMode::lrd_gaussian, 0.4, 1.0, gauss(seed), 5000, 5000}, n));
  const auto a = predictor_coeffs(0.4, 1.0, 5000);
  const double nd = static_cast<double>(n);
  const double expected = (nd - partial_sum_variance_oracle(a, n) / nd) / (nd - 1.0);
  EXPECT_NEAR(total / 50.0, 1.0, 0.1);
  EXPECT_NEAR(total / 50.0, expected, 0.06);
}

TEST(Predictors, CoefficientsNormalized) {
  const auto a = predictor_coeffs(0.4, 2.0, 1000);
  EXPECT_NEAR(a.sum_of_squares(), 1.0, 1e-12);
  EXPECT_THROW(predictor_coeffs(1.0, 1.0, 10), Error);
  EXPECT_THROW(simulate_predictors({PredictorMode::iid_gaussian, 1.0, 1.0, {InnovationLaw::centered_uniform, 1}}, 10),
               Error);
}

TEST(Validation, SpecInvariants) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.4);
  s.d = 0.1;
  EXPECT_THROW(simulate_errors(s, 10), Error);
  auto t = ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 1.0);
  try {
    simulate_errors(t, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::domain);
  }
  auto u = ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.4);
  u.truncation_K = 100;
  u.burn_in = 50;
  EXPECT_THROW(simulate_errors(u, 10), Error);
  EXPECT_THROW(simulate_errors(ProcessSpec::with_d(ProcessFamily::farima, 0.5), 10), Error);
  EXPECT_NO_THROW(simulate_errors(ProcessSpec::with_d(ProcessFamily::farima, -0.3), 10));
}

TEST(Validation, FamilyNames) {
  EXPECT_EQ(parse_process_family("farima-garch"), ProcessFamily::farima_garch);
  EXPECT_EQ(parse_process_family(to_string(ProcessFamily::larch)), ProcessFamily::larch);
  EXPECT_THROW(parse_process_family("arch"), Error);
}
