#include <gtest/gtest.h>

#include "gbf/pkmetrics.hpp"
#include "gbf/steady_state.hpp"
#include "test_support.hpp"

using namespace gbf;
using gbf::testing::rel_diff;

namespace {

// Trough and peak of the limiting cycle from the limit formulas written out directly.
double limit_trough(double ka, double ke, double g, double v, double d, double tau) {
  const double a = std::exp(-ka * tau), b = std::exp(-ke * tau);
  return ka * g * d / (v * (ka - ke)) * (b / (1 - b) - a / (1 - a));
}

}  // namespace

TEST(SteadyState, LowerBoundMatchesGeometricLimit) {
  EXPECT_LE(rel_diff(ss_lower(validate_params(1.0, 0.1, 1, 1), 100, 6), limit_trough(1.0, 0.1, 1, 1, 100, 6)),
            1e-13);
  EXPECT_LE(rel_diff(ss_lower(validate_params(0.1, 1.0, 1, 1), 100, 6), limit_trough(0.1, 1.0, 1, 1, 100, 6)),
            1e-13);
}

TEST(SteadyState, BoundsAreLimitsOfFiniteCycles) {
  for (auto [ka, ke] : {std::pair{1.0, 0.1}, std::pair{0.1, 1.0}, std::pair{0.748, 0.2031}}) {
    const auto p = validate_params(ka, ke, 1, 1);
    EXPECT_LE(rel_diff(remainders(equi_multidose(p, 100, 6), 400).x, ss_lower(p, 100, 6)), 1e-12);
    EXPECT_LE(rel_diff(peak(p, 100, 6, 400).x_max, ss_upper(p, 100, 6)), 1e-12);
  }
}

TEST(SteadyState, SteadyPeakIsInsideCycle) {
  std::mt19937_64 rng(3);
  for (int c = 0; c < 50; ++c) {
    const auto p = validate_params(gbf::testing::random_params(rng));
    for (double tau : {0.1, 1.0, 12.0, 200.0}) {
      const Peak pk = peak(p, 100, tau, 3000);
      EXPECT_EQ(pk.location, PeakLocation::Interior);
    }
  }
}

TEST(SteadyState, WidthLimitIsSingleDosePeak) {
  const double ka = 0.748, ke = 0.2031;
  const auto p = validate_params(ka, ke, 19.1933);
  const double t_peak = std::log(ka / ke) / (ka - ke);
  EXPECT_LE(rel_diff(width_limit(p, 250), gbf::testing::bateman(ka, ke, 19.1933, 5000, 250, t_peak)), 1e-13);
  EXPECT_LE(rel_diff(width(p, 250, 1e4), width_limit(p, 250)), 1e-10);
}

TEST(SteadyState, SwapRescalesBounds) {
  const auto a = validate_params(1.3, 0.2, 2.0);
  const auto b = validate_params(0.2, 1.3, 2.0);
  EXPECT_LE(rel_diff(ss_lower(b, 100, 5), 0.2 / 1.3 * ss_lower(a, 100, 5)), 1e-12);
  EXPECT_LE(rel_diff(ss_upper(b, 100, 5), 0.2 / 1.3 * ss_upper(a, 100, 5)), 1e-12);
}

TEST(SteadyState, AucEquality) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const AucEquality e = auc_equality_check(p, 250, 12);
  EXPECT_LE(e.rel_diff, 1e-12);
  EXPECT_LE(rel_diff(auc_cycle(p, 250, 12, 500), e.auc_single), 1e-12);
}

TEST(PeriodicityGap, MatchesTwoExponentialDifference) {
  // x^(n) - x^(n-1) at offset u is K (beta^{n-1} e^{-ke u} - alpha^{n-1} e^{-ka u}).
  const double ka = 1.0, ke = 0.1, d = 100, tau = 6;
  const auto p = validate_params(ka, ke, 1, 1);
  const auto sol = equi_multidose(p, d, tau);
  const double k = ka * d / (ka - ke);
  for (std::size_t n : {2u, 3u, 10u, 20u}) {
    const double nm = static_cast<double>(n - 1);
    double sup = 0;
    for (int i = 0; i <= 100000; ++i) {
      const double u = tau * i / 100000.0;
      sup = std::max(sup, std::abs(k * (std::exp(-ke * tau * nm - ke * u) - std::exp(-ka * tau * nm - ka * u))));
    }
    EXPECT_LE(rel_diff(periodicity_gap(sol, n), sup), 1e-10) << n;
  }
}

TEST(PeriodicityGap, ValidBoundHolds) {
  std::mt19937_64 rng(11);
  for (int c = 0; c < 10; ++c) {
    const auto p = validate_params(gbf::testing::random_params(rng));
    const double tau = 2.0 + c;
    const auto sol = equi_multidose(p, 100, tau);
    const double floor = 1e-13 * ss_upper(p, 100, tau);
    for (std::size_t n = 2; n <= 60; ++n)
      EXPECT_LE(periodicity_gap(sol, n, 2000), periodicity_bound(p, 100, tau, n) * (1 + 1e-12) + floor);
  }
}

TEST(PeriodicityGap, SuccessiveRatioTendsToInverseBeta) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  const auto sol = equi_multidose(p, 100, 6);
  const double inv_beta = std::exp(0.1 * 6);
  // (alpha/beta)^{n-1} is negligible from n = 8; past n ~ 15 coefficient roundoff dominates the gap.
  for (std::size_t n = 8; n <= 14; ++n)
    EXPECT_LE(rel_diff(periodicity_gap(sol, n) / periodicity_gap(sol, n + 1), inv_beta), 1e-9) << n;
}

TEST(PeriodicityGap, PrintedEnvelopeOverGapTendsToBeta) {
  // K d (alpha^n + beta^n) against the measured gap, which starts at K d beta^{n-1}.
  const double ka = 1.0, ke = 0.1, d = 100, tau = 6;
  const auto p = validate_params(ka, ke, 1, 1);
  const auto sol = equi_multidose(p, d, tau);
  const double k = ka * d / (ka - ke);
  const double alpha = std::exp(-ka * tau), beta = std::exp(-ke * tau);
  for (std::size_t n : {2u, 5u, 12u}) {
    const double nn = static_cast<double>(n);
    EXPECT_LE(rel_diff(periodicity_envelope(p, d, tau, n), k * (std::pow(alpha, nn) + std::pow(beta, nn))), 1e-14);
  }
  EXPECT_LE(rel_diff(periodicity_envelope(p, d, tau, 12) / periodicity_gap(sol, 12), beta), 1e-9);
}

TEST(PeriodicityGap, ArbitraryScheduleEqualIntervals) {
  const auto p = validate_params(0.9, 0.3, 2.0);
  const auto ar = arbitrary_multidose(p, Regimen::equi(100, 4).truncated(12));
  const auto eq = equi_multidose(p, 100, 4);
  for (std::size_t n = 2; n <= 12; ++n) EXPECT_NEAR(periodicity_gap(ar, n, 500), periodicity_gap(eq, n, 500), 1e-12);
  EXPECT_THROW(periodicity_gap(eq, 1), Error);
}

TEST(NEpsilon, ForAllLaterCycles) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  const double eps = 1e-6;
  const std::size_t n = n_epsilon(p, 100, 6, eps);
  const auto sol = equi_multidose(p, 100, 6);
  EXPECT_GE(periodicity_gap(sol, n - 1), eps);
  for (std::size_t m = n; m < n + 40; ++m) EXPECT_LT(periodicity_gap(sol, m), eps);
  EXPECT_LT(n_epsilon(p, 100, 6, 1e-3), n);
  EXPECT_EQ(n_epsilon(p, 100, 6, 1e6), 2u);
}

TEST(Summary, CollectsQuantities) {
  const auto p = validate_params(1.0, 0.1, 1, 1);
  const SteadyStateSummary s = summarize_steady_state(p, 100, 6);
  EXPECT_DOUBLE_EQ(s.ss_lower, ss_lower(p, 100, 6));
  EXPECT_DOUBLE_EQ(s.width, s.ss_upper - s.ss_lower);
  EXPECT_EQ(s.n_epsilon, n_epsilon(p, 100, 6, 1e-6));
}
