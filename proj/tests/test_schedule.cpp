#include <gtest/gtest.h>

#include <cmath>

#include "seriation/schedule.hpp"
#include "seriation/rng.hpp"

using namespace seriation;

namespace {

// Direct evaluation of the epsilon equation's left side in long double.
long double lhs_oracle(int k, long double a) {
  return powl((1 - a) / 2, k - 1) / (1 + a) + powl(2.0L, -k) / (1 + a) * (1 + 2 / (k * (1 + a)));
}

}  // namespace

TEST(Epsilon, LhsValues) {
  EXPECT_NEAR(epsilon_equation_lhs(3, 0.0), 0.458333333333, 1e-10);
  EXPECT_NEAR(epsilon_equation_lhs(4, 0.0), 0.21875, 1e-12);
  EXPECT_NEAR(epsilon_equation_lhs(1, 0.0), 2.5, 1e-12);
  EXPECT_NEAR(epsilon_equation_lhs(2, 0.0), 1.0, 1e-12);
}

TEST(Epsilon, Examples) {
  EpsilonChoice c = epsilon_for_delta(0.5, 0.0);
  EXPECT_EQ(c.k, 4);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.125);
  c = epsilon_for_delta(2.5, 0.0);
  EXPECT_EQ(c.k, 2);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.5);
  c = epsilon_for_delta(10.0, 0.0);
  EXPECT_EQ(c.k, 1);
  EXPECT_DOUBLE_EQ(c.epsilon, 0.5);
  try {
    epsilon_for_delta(1e-30, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::infeasible);
  }
}

TEST(Epsilon, LhsDecreasesInK) {
  for (double a : {0.0, 0.3, 0.7, 0.99})
    for (int k = 1; k < 40; ++k) ASSERT_LT(epsilon_equation_lhs(k + 1, a), epsilon_equation_lhs(k, a));
}

TEST(Epsilon, MinimalKOverRandomInputs) {
  const rng::Stream s(42, "eps");
  for (std::uint64_t t = 0; t < 100; ++t) {
    const double delta = 0.01 + 0.99 * s.uniform({t, 0}), alpha = 0.99 * s.uniform({t, 1});
    const EpsilonChoice c = epsilon_for_delta(delta, alpha);
    ASSERT_LE(lhs_oracle(c.k, alpha), delta / 2);
    if (c.k > 1) {
      ASSERT_GT(lhs_oracle(c.k - 1, alpha), delta / 2);
    }
  }
}

TEST(Schedule, HandComputedExample) {
  ScheduleParams sp;
  sp.n = 10000;
  sp.alpha = 0.0;
  sp.gamma = 0.3;
  sp.epsilon = 0.25;
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule s = build_schedule(sp);
  EXPECT_EQ(s.k, 3);
  EXPECT_NEAR(s.beta, 1.0 / 24, 1e-15);
  ASSERT_EQ(s.p.size(), 3u);
  const long double n = 10000;
  EXPECT_NEAR(s.p[0], double(powl(n, -2.0L / 24)), 1e-9 * s.p[0]);
  EXPECT_NEAR(s.p[1], double(powl(n, -1.0L / 24)), 1e-9 * s.p[1]);
  EXPECT_NEAR(s.p[0], 0.46416, 1e-5);
  EXPECT_NEAR(s.p[1], 0.68129, 1e-5);
  EXPECT_EQ(s.p[2], 1.0);
  EXPECT_NEAR(s.d_unclamped[0], double(powl(n, -0.3L)), 1e-9 * s.d_unclamped[0]);
  EXPECT_NEAR(s.d_unclamped[0], 0.063096, 1e-6);
  EXPECT_EQ(s.c1.size(), 2u);
}

TEST(Schedule, HalfEpsilonGivesTwoRounds) {
  ScheduleParams sp;
  sp.n = 1000;
  sp.epsilon = 0.5;
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule s = build_schedule(sp);
  EXPECT_EQ(s.k, 2);
  EXPECT_DOUBLE_EQ(s.beta, 0.125);
  EXPECT_EQ(s.refinement_rounds(), 1);
}

TEST(Schedule, ExplicitSingleRoundHasNoThresholds) {
  ScheduleParams sp;
  sp.n = 100;
  sp.epsilon = 0.5;
  sp.rounds = 1;
  const StageSchedule s = build_schedule(sp);
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(s.p, std::vector<double>{1.0});
  EXPECT_TRUE(s.c1.empty());
}

TEST(Schedule, StrictPolicyRejectsDegenerateThresholds) {
  ScheduleParams sp;
  sp.n = 500;
  sp.epsilon = 0.25;
  try {
    build_schedule(sp);
    FAIL() << "expected schedule_degenerate";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schedule_degenerate);
    EXPECT_NE(std::string(e.what()).find("round"), std::string::npos);
  }
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule s = build_schedule(sp);
  for (auto c : s.c2) EXPECT_GE(c, 1);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(Schedule, ClampsAreMonotoneAndReported) {
  for (std::size_t n : {500, 2000, 10000, 100000}) {
    ScheduleParams sp;
    sp.n = n;
    sp.epsilon = 0.25;
    sp.policy = ThresholdPolicy::floor_at_one;
    const StageSchedule s = build_schedule(sp);
    for (std::size_t i = 1; i < s.d.size(); ++i) ASSERT_LE(s.d[i], s.d[i - 1] / 2 * (1 + 1e-15));
    std::size_t clamps = 0;
    for (std::size_t i = 0; i < s.d.size(); ++i) clamps += s.d[i] < s.d_unclamped[i];
    std::size_t clamp_warnings = 0;
    for (const auto& w : s.warnings) clamp_warnings += w.find("clamped") != std::string::npos;
    ASSERT_EQ(clamps, clamp_warnings);
    for (std::size_t i = 0; i + 1 < s.p.size(); ++i) ASSERT_LT(s.p[i], s.p[i + 1]);
  }
}

TEST(Schedule, SanityInequalityWarnsWhenViolated) {
  ScheduleParams sp;
  sp.n = 4000;
  sp.epsilon = 0.25;
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule s = build_schedule(sp);
  for (std::size_t i = 0; i < s.c1.size(); ++i) {
    const double logn = std::log(4000.0);
    const bool holds = s.c2[i] / 2.0 >= std::sqrt(double(s.c1[i])) * logn + logn * logn;
    bool warned = false;
    for (const auto& w : s.warnings) warned |= w.rfind("round " + std::to_string(i + 1) + ": C2/2", 0) == 0;
    ASSERT_EQ(warned, !holds);
  }
}

TEST(Schedule, SmallerM1RaisesC2) {
  ScheduleParams sp;
  sp.n = 4000;
  sp.epsilon = 0.25;
  sp.policy = ThresholdPolicy::floor_at_one;
  const StageSchedule a = build_schedule(sp);
  sp.m1 = 0.1;
  const StageSchedule b = build_schedule(sp);
  for (std::size_t i = 0; i < a.c2.size(); ++i) EXPECT_GE(b.c2[i], a.c2[i]);
}

TEST(Schedule, ValidationErrors) {
  ScheduleParams sp;
  sp.n = 4;
  EXPECT_THROW(build_schedule(sp), Error);
  sp.n = 100;
  sp.epsilon = 0.6;
  EXPECT_THROW(build_schedule(sp), Error);
  sp.epsilon = 0.25;
  sp.gamma = 0.0;
  EXPECT_THROW(build_schedule(sp), Error);
}

TEST(Extension, ThresholdFormulas) {
  const std::size_t n = 3000, nr = 1000;
  const double a = 0.5, delta = 0.05, logn = std::log(3000.0);
  const ExtensionThresholds t = extension_thresholds(n, nr, a, delta, 1.0, ThresholdPolicy::floor_at_one);
  EXPECT_EQ(t.c1, std::int64_t(std::ceil(nr * std::pow(double(n), -1 / 1.5 + delta) * logn)));
  const double c2 = std::sqrt(double(nr)) * std::pow(double(n), -0.5 + delta * 0.75) / 6;
  EXPECT_EQ(t.c2, std::max<std::int64_t>(1, std::int64_t(std::floor(c2))));
  EXPECT_THROW(extension_thresholds(n, nr, a, delta), Error);
}
