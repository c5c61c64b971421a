#include <gtest/gtest.h>
#include <quadmath.h>

#include "gbf/dosing.hpp"
#include "gbf/pkmetrics.hpp"
#include "gbf/steady_state.hpp"
#include "test_support.hpp"

using namespace gbf;
using gbf::testing::rel_diff;

TEST(SolverContextTest, ExponentsAndOrdering) {
  const SolverContext c(validate_params(0.2, 1.0, 1.0));
  EXPECT_DOUBLE_EQ(c.ka_eff(), 1.0);
  EXPECT_DOUBLE_EQ(c.ke_eff(), 0.2);
  EXPECT_NEAR(c.p2() - c.p1(), 1.0, 1e-15);
  EXPECT_GT(c.p4(), c.p3());
}

TEST(FRatio, EqualsBoundRatio) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto p = validate_params(gbf::testing::random_params(rng));
    for (double tau : {0.3, 4.0, 30.0}) {
      const double d = 10.0 + i;
      EXPECT_LE(rel_diff(f_ratio(p, tau), ss_upper(p, d, tau) / ss_lower(p, d, tau)), 1e-10);
    }
  }
}

TEST(FRatio, LimitAtZeroAndMonotone) {
  for (auto [ka, ke] : {std::pair{1.0, 0.1}, std::pair{0.1, 1.0}, std::pair{0.748, 0.2031}}) {
    const auto p = validate_params(ka, ke, 1.0);
    // f - 1 ~ tau^2: at 1e-8 the excess is far below one ulp of f.
    const double e0 = f_ratio_minus_one(p, 1e-8);
    EXPECT_GT(e0, 0.0);
    EXPECT_LT(e0, 1e-3);
    EXPECT_GE(f_ratio(p, 1e-8), 1.0);
    double prev = 0.0;
    for (int i = 0; i < 80; ++i) {
      const double tau = std::pow(10.0, -8.0 + 11.0 * i / 79.0);
      const double f = f_ratio_minus_one(p, tau);
      EXPECT_GT(f, prev) << tau;
      prev = f;
    }
  }
}

TEST(FRatio, ExcessMatchesQuadPrecision) {
  // Plain peak/trough ratio in 113-bit arithmetic.
  auto oracle = [](double ka, double ke, double tau) {
    const __float128 a = ka, e = ke, t = tau;
    const __float128 w = -expm1q(-e * t), z = -expm1q(-a * t);
    const __float128 lr = logq(a * w / (e * z));
    const __float128 up = expq(-e / (a - e) * lr) / w - expq(-a / (a - e) * lr) / z;
    const __float128 lo = 1 / expm1q(e * t) - 1 / expm1q(a * t);
    return static_cast<double>(up / lo - 1);
  };
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const PkParams raw = gbf::testing::random_params(rng);
    const auto p = validate_params(raw);
    const double a = std::max(raw.ka, raw.ke), e = std::min(raw.ka, raw.ke);
    for (double tau = 1e-8; tau < 200; tau *= 2.3)
      EXPECT_LE(rel_diff(f_ratio_minus_one(p, tau), oracle(a, e, tau)), 1e-11) << tau;
  }
}

TEST(FRatio, SwapInvariant) {
  for (double tau : {0.5, 6.0, 40.0})
    EXPECT_LE(rel_diff(f_ratio(validate_params(1.3, 0.2, 1), tau), f_ratio(validate_params(0.2, 1.3, 1), tau)),
              1e-13);
}

TEST(Design, RoundTripExample) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  const Design d = design(p, ss_lower(p, 100, 6), ss_upper(p, 100, 6));
  EXPECT_LE(rel_diff(d.d_star, 100), 1e-6);
  EXPECT_LE(rel_diff(d.tau_star, 6), 1e-6);
  EXPECT_LE(d.iterations, 2 * kDesignMaxIterations);
  EXPECT_LE(d.f_residual, 1e-12);
}

TEST(Design, AchievesTargetsInBothOrderings) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto p = validate_params(gbf::testing::random_params(rng));
    std::uniform_real_distribution<double> lo(0.1, 5.0), ratio(1.05, 20.0);
    const double l = lo(rng), u = l * ratio(rng);
    const Design d = design(p, l, u);
    EXPECT_LE(rel_diff(ss_lower(p, d.d_star, d.tau_star), l), 1e-8);
    EXPECT_LE(rel_diff(ss_upper(p, d.d_star, d.tau_star), u), 1e-8);
  }
}

TEST(Design, ScaleInvariance) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const Design a = design(p, 0.3, 0.9);
  const Design b = design(p, 3.0, 9.0);
  EXPECT_LE(rel_diff(a.tau_star, b.tau_star), 1e-12);
  EXPECT_LE(rel_diff(10 * a.d_star, b.d_star), 1e-10);
}

TEST(Design, SwapKeepsIntervalScalesDose) {
  const auto a = validate_params(1.3, 0.2, 2.0);
  const auto b = validate_params(0.2, 1.3, 2.0);
  const Design da = design(a, 1.0, 2.5);
  const Design db = design(b, 1.0, 2.5);
  EXPECT_LE(rel_diff(da.tau_star, db.tau_star), 1e-10);
  EXPECT_LE(rel_diff(db.d_star, 1.3 / 0.2 * da.d_star), 1e-9);
}

TEST(Design, RatioNearOneGivesSmallInterval) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  const Design d = design(p, 1.0, 1.0 + 1e-6);
  EXPECT_GT(d.tau_star, 1e-9);
  EXPECT_LT(d.tau_star, 0.1);
  EXPECT_LE(rel_diff(ss_upper(p, d.d_star, d.tau_star), 1.0 + 1e-6), 1e-8);
  const Design tight = design(p, 1.0, 1.0 + 1e-12);
  EXPECT_LT(tight.tau_star, d.tau_star);
  EXPECT_LE(rel_diff(ss_upper(p, tight.d_star, tight.tau_star), 1.0 + 1e-12), 1e-8);
}

TEST(Design, RejectsBadTargets) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  EXPECT_THROW(design(p, 2.0, 1.0), Error);
  try {
    design(p, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TargetRatioOutOfRange);
  }
  try {
    design(p, TherapeuticTarget{1.0, 4.0, 3.5, 1.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidTarget);
  }
  EXPECT_THROW(validate_target({1.0, 4.0, 0.5, 3.0}), Error);
  EXPECT_THROW(validate_target({1.0, 4.0, 1.5, 4.5}), Error);
  EXPECT_THROW(validate_target({0.0, 4.0, 1.5, 3.0}), Error);
}

TEST(Feasibility, DesignIsFeasibleAndTinyDoseIsNot) {
  const auto p = validate_params(0.5, 0.16, 25.0);
  const TherapeuticTarget t{1.0, 4.0, 1.5, 3.5};
  const Design d = design(p, t);
  EXPECT_TRUE(feasible_set_check(p, d.d_star, d.tau_star, t));
  EXPECT_FALSE(feasible_set_check(p, 1e-6, d.tau_star, t));
}

// Synthetic stand-ins for the two narrative patients: under the standard
// 600 mg / 24 h plan one sits above the window, the other dips below MIC.
TEST(Feasibility, StandardPlanFailsForStandIns) {
  const TherapeuticTarget t{1.0, 4.0, 1.5, 3.5};  // ug/mL
  const auto above = validate_params(0.9, 0.07, 55.0);
  const auto below = validate_params(0.5, 0.16, 25.0);
  EXPECT_FALSE(feasible_set_check(above, 600, 24, t));
  EXPECT_GT(ss_upper(above, 600, 24), t.tc);
  EXPECT_FALSE(feasible_set_check(below, 600, 24, t));
  EXPECT_LT(ss_lower(below, 600, 24), t.mic);
  for (const auto& p : {above, below}) {
    const Design d = design(p, t);
    EXPECT_LT(d.tau_star, 24.0);
    EXPECT_TRUE(feasible_set_check(p, d.d_star, d.tau_star, t));
  }
}

TEST(Rounding, RechecksFeasibility) {
  const auto p = validate_params(0.5, 0.16, 25.0);
  const TherapeuticTarget t{1.0, 4.0, 1.5, 3.5};
  const Design d = design(p, t);
  const RoundedDesign r = round_design(p, d, t, 50.0, 2.0);
  EXPECT_DOUBLE_EQ(std::fmod(r.dose, 50.0), 0.0);
  EXPECT_DOUBLE_EQ(std::fmod(r.tau, 2.0), 0.0);
  EXPECT_EQ(r.feasible, feasible_set_check(p, r.dose, r.tau, t));
  const RoundedDesign same = round_design(p, d, t, std::nullopt, std::nullopt);
  EXPECT_DOUBLE_EQ(same.dose, d.d_star);
  EXPECT_TRUE(same.feasible);
}
