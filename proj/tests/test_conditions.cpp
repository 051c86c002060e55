#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lrdreg/conditions.hpp"

using namespace lrdreg;

namespace {

const std::vector<std::size_t> ladder{256, 512, 1024, 2048, 4096};

Verdict verdict_of(const std::vector<ConditionVerdict>& vs, ConditionId id) {
  for (const auto& v : vs)
    if (v.id == id) return v.verdict;
  ADD_FAILURE() << "missing condition " << to_string(id);
  return Verdict::bounded;
}

ProcessSpec small_truncation(ProcessSpec s, std::size_t K = 4096) {
  s.truncation_K = K;
  return s;
}

}  // namespace

TEST(BandwidthConditions, ShapeConditionIsWeaker) {
  const auto vs = check_bandwidth_conditions(0.4, 1.0, {1.0, 0.2});
  EXPECT_EQ(verdict_of(vs, ConditionId::B1), Verdict::diverges);
  EXPECT_EQ(verdict_of(vs, ConditionId::B2), Verdict::tends_to_zero);
  EXPECT_NEAR(vs[0].exponent, 0.4, 1e-15);
  EXPECT_NEAR(vs[1].exponent, -0.4, 1e-15);
}

TEST(BandwidthConditions, WeakMemoryBothHold) {
  const auto vs = check_bandwidth_conditions(0.9, 1.0, {1.0, 0.2});
  EXPECT_EQ(verdict_of(vs, ConditionId::B1), Verdict::tends_to_zero);
  EXPECT_EQ(verdict_of(vs, ConditionId::B2), Verdict::tends_to_zero);
  EXPECT_NEAR(vs[0].exponent, -0.1, 1e-15);
  EXPECT_NEAR(vs[1].exponent, -0.9, 1e-15);
}

TEST(BandwidthConditions, IidPredictorsAlwaysSatisfyC2) {
  for (double beta : {0.01, 0.2, 0.5, 0.99})
    EXPECT_EQ(verdict_of(check_bandwidth_conditions(0.5, 1.0, {1.0, beta}), ConditionId::C2), Verdict::tends_to_zero);
}

TEST(BandwidthConditions, StatisticsFollowExponent) {
  const auto vs = check_bandwidth_conditions(0.4, 0.6, {2.0, 0.3}, ladder);
  for (const auto& v : vs) {
    ASSERT_EQ(v.statistic_values.size(), ladder.size());
    const double slope = std::log(v.statistic_values.back() / v.statistic_values.front()) /
                         std::log(v.n_values.back() / v.n_values.front());
    EXPECT_NEAR(slope, v.exponent, 1e-9) << to_string(v.id);
  }
}

TEST(BandwidthConditions, VerdictsFlipAtThresholds) {
  for (int i = 0; i < 50; ++i) {
    const double alpha = 0.02 + 0.98 * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double beta = 0.01 + 0.98 * j / 49.0;
      const auto vs = check_bandwidth_conditions(alpha, alpha, {1.0, beta});
      const auto expected = [](double e) {
        if (std::abs(e) <= analytic_exponent_tolerance) return Verdict::bounded;
        return e < 0 ? Verdict::tends_to_zero : Verdict::diverges;
      };
      // B-type holds iff beta > 1 - alpha; shape-type iff beta > (1 - alpha) / 5.
      EXPECT_EQ(verdict_of(vs, ConditionId::B1), expected(1.0 - alpha - beta));
      EXPECT_EQ(verdict_of(vs, ConditionId::B2), expected(1.0 - alpha - 5.0 * beta));
      EXPECT_EQ(verdict_of(vs, ConditionId::C1), expected(1.0 - alpha - 5.0 * beta));
      EXPECT_EQ(verdict_of(vs, ConditionId::C2), expected(1.0 - alpha - beta));
      EXPECT_EQ(verdict_of(vs, ConditionId::B1) == Verdict::tends_to_zero, beta > 1.0 - alpha);
      EXPECT_EQ(verdict_of(vs, ConditionId::B2) == Verdict::tends_to_zero, 5.0 * beta > 1.0 - alpha);
    }
  }
}

TEST(BandwidthConditions, DomainChecked) {
  EXPECT_THROW(check_bandwidth_conditions(0.0, 1.0, {}), Error);
  EXPECT_THROW(check_bandwidth_conditions(0.5, 1.5, {}), Error);
}

TEST(Classification, Tolerance) {
  EXPECT_EQ(classify_exponent(-0.2, 0.1), Verdict::tends_to_zero);
  EXPECT_EQ(classify_exponent(0.05, 0.1), Verdict::bounded);
  EXPECT_EQ(classify_exponent(0.2, 0.1), Verdict::diverges);
  EXPECT_EQ(parse_verdict(to_string(Verdict::diverges)), Verdict::diverges);
  EXPECT_EQ(parse_condition_id(to_string(ConditionId::var_linear)), ConditionId::var_linear);
}

TEST(NegligibilityA, LinearProcessTendsToZero) {
  const auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.4));
  const auto v = check_negligibility_A(s, ladder, {1.0, 0.5}, 100, 1);
  EXPECT_EQ(v.verdict, Verdict::tends_to_zero);
  EXPECT_NEAR(v.exponent, -0.25, 0.1);
  EXPECT_EQ(v.tolerance, monte_carlo_exponent_tolerance);
}

TEST(NegligibilityA, StochasticVolatilityTendsToZero) {
  const auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::stochastic_volatility, 0.2));
  EXPECT_EQ(check_negligibility_A(s, ladder, {1.0, 0.5}, 100, 2).verdict, Verdict::tends_to_zero);
}

TEST(NegligibilityA, ConstantBandwidthIsBounded) {
  const ProcessSpec s = ProcessSpec::with_alpha(ProcessFamily::iid, 1.0);
  EXPECT_EQ(check_negligibility_A(s, ladder, {0.5, 0.0}, 200, 3).verdict, Verdict::bounded);
}

TEST(NegligibilityA, ReproducibleAndWorkerIndependent) {
  const auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.6), 512);
  const std::vector<std::size_t> short_ladder{128, 256};
  const auto a = check_negligibility_A(s, short_ladder, {1.0, 0.5}, 20, 4, 1);
  const auto b = check_negligibility_A(s, short_ladder, {1.0, 0.5}, 20, 4, 4);
  EXPECT_EQ(a.statistic_values, b.statistic_values);
}

TEST(VarianceGrowth, LinearIsExactlyLinear) {
  // The gap sum is minus the innovation sum for any truncation, so a short filter keeps many replicates cheap.
  const auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::linear_lrd, 0.3), 512);
  const auto v = check_var_linear_growth(s, ladder, 1000, 5);
  // Statistic is Var / n, so a slope of 1 for the variance is 0 here.
  EXPECT_NEAR(v.exponent, 0.0, 0.05);
  EXPECT_EQ(v.verdict, Verdict::bounded);
}

TEST(VarianceGrowth, GapIsMinusInnovationSum) {
  const auto s = small_truncation(ProcessSpec::with_d(ProcessFamily::farima, 0.3, {InnovationLaw::standard_gaussian, 0}), 256);
  const auto sums = martingale_gap_sums(s, 100, 3, 6, 1);
  for (std::size_t r = 0; r < 3; ++r) {
    ProcessSpec t = s;
    t.innovation.seed = split_seed(6, r);
    const auto eta = draw_innovations(t.innovation, 100);
    double total = 0.0;
    for (double e : eta) total += e;
    EXPECT_NEAR(sums[r], -total, 1e-10);
  }
}

TEST(VarianceGrowth, SquareFunctionalAtMostLinear) {
  auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6));
  const auto v = check_var_linear_growth(s, ladder, 100, 7);
  EXPECT_LE(v.exponent + 1.0, 1.1);
}

TEST(VarianceGrowth, LarchAtMostLinear) {
  auto s = small_truncation(ProcessSpec::with_alpha(ProcessFamily::larch, 0.4), 1024);
  s.params.scale = 0.5;
  const auto v = check_var_linear_growth(s, ladder, 100, 8);
  EXPECT_LE(v.exponent + 1.0, 1.1);
}

TEST(VarianceGrowth, UnsupportedFamily) {
  auto s = ProcessSpec::with_alpha(ProcessFamily::functional_of_linear, 0.6);
  s.params.functional = Functional::abs_power_centered;
  try {
    check_var_linear_growth(s, ladder, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::unsupported);
  }
  EXPECT_THROW(check_negligibility_A(s, ladder, {}, 10, 1), Error);
}
