#include <gtest/gtest.h>

#include "gbf/bateman.hpp"
#include "test_support.hpp"

using namespace gbf;
using gbf::testing::bateman;
using gbf::testing::rel_diff;

TEST(SingleDose, MatchesBatemanCurve) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const SingleDose sd = single_dose(p, 250);
  for (double t : {0.0, 0.5, 2.39, 10.0, 48.0})
    EXPECT_LE(std::abs(sd.concentration(t) - bateman(0.748, 0.2031, 19.1933, 5000, 250, t)), 1e-15);
  EXPECT_DOUBLE_EQ(sd.concentration(0.0), 0.0);
  EXPECT_DOUBLE_EQ(sd.gut_amount(0.0), 250.0);
}

TEST(SingleDose, ClarithromycinPeak) {
  // Peak of the fitted curve sits where ka e^{-ka t} = ke e^{-ke t}.
  const double ka = 0.748, ke = 0.2031;
  const double t_peak = std::log(ka / ke) / (ka - ke);
  EXPECT_NEAR(t_peak, 2.39, 0.01);
  const SingleDose sd(validate_params(ka, ke, 19.1933), 250);
  EXPECT_NEAR(sd.concentration(t_peak), 0.59, 0.01);
}

TEST(SingleDose, SwapRescalesByRateRatio) {
  // Swapping the rates keeps the shape and rescales by ke/ka.
  const double ka = 1.3, ke = 0.2;
  const SingleDose a(validate_params(ka, ke, 2.0), 100);
  const SingleDose b(validate_params(ke, ka, 2.0), 100);
  for (double t : {0.1, 1.0, 5.0, 20.0})
    EXPECT_LE(rel_diff(b.concentration(t), ke / ka * a.concentration(t)), 1e-13);
}

TEST(SingleDose, RejectsNegativeTime) {
  const SingleDose sd(validate_params(1, 0.1, 1), 100);
  EXPECT_THROW(sd.concentration(-1.0), Error);
}

TEST(EquiMultidose, FirstCycleIsSingleDose) {
  const auto p = validate_params(1.0, 0.1, 1.0, 1.0);
  const auto sol = equi_multidose(p, 100, 6);
  const SingleDose sd(p, 100);
  for (double t = 0; t < 6.0; t += 0.37) EXPECT_LE(rel_diff(sol.concentration(t), sd.concentration(t)), 1e-14);
}

TEST(EquiMultidose, ContinuousAtDoseTimesAndGutJumps) {
  const auto p = validate_params(1.0, 0.1, 1.0, 1.0);
  const auto sol = equi_multidose(p, 100, 6);
  for (std::size_t n = 1; n <= 20; ++n) {
    const CycleCoefficients c = sol.cycle(n);
    const CycleCoefficients next = sol.cycle(n + 1);
    const double end = c.concentration_at(p, 6.0);
    EXPECT_LE(std::abs(end - next.concentration_at(p, 0.0)), 1e-12 * std::abs(end) + 1e-14);
    EXPECT_NEAR(next.y_start - c.gut_amount_at(p, 6.0), 100.0, 1e-10);
    EXPECT_EQ(sol.cycle_index(sol.dose_time(n)), n + 1);
  }
}

TEST(EquiMultidose, RemainderClosedForm) {
  const double ka = 1.0, ke = 0.1, d = 100, tau = 6;
  const auto p = validate_params(ka, ke, 1.0, 1.0);
  const auto sol = equi_multidose(p, d, tau);
  const double a = std::exp(-ka * tau), b = std::exp(-ke * tau), k = ka / (ka - ke);
  for (std::size_t n : {1u, 2u, 5u, 40u}) {
    const double nn = static_cast<double>(n);
    const double expect = k * d * (b * (1 - std::pow(b, nn)) / (1 - b) - a * (1 - std::pow(a, nn)) / (1 - a));
    EXPECT_LE(rel_diff(sol.remainder(n).x, expect), 1e-12);
    EXPECT_LE(rel_diff(sol.remainder(n).y, d * a * (1 - std::pow(a, nn)) / (1 - a)), 1e-12);
  }
  EXPECT_EQ(sol.remainder(0).x, 0.0);
}

TEST(ArbitraryMultidose, RemainderMatchesProductSum) {
  std::mt19937_64 rng(42);
  for (int c = 0; c < 20; ++c) {
    const PkParams raw = gbf::testing::random_params(rng);
    const auto e = gbf::testing::random_schedule(rng);
    const auto sol = arbitrary_multidose(validate_params(raw), Regimen::arbitrary(e));
    for (std::size_t n = 1; n <= e.size(); ++n) {
      const double oracle = gbf::testing::product_sum_remainder(raw.ka, raw.ke, raw.gamma, raw.volume, e, n);
      EXPECT_LE(std::abs(sol.remainder(n).x - oracle), 1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST(ArbitraryMultidose, EquiEntriesReproduceEquiForm) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const auto eq = equi_multidose(p, 250, 12);
  const auto ar = arbitrary_multidose(p, Regimen::equi(250, 12).truncated(15));
  for (double t = 0; t < 180; t += 0.9) EXPECT_LE(std::abs(eq.concentration(t) - ar.concentration(t)), 1e-13);
}

TEST(ArbitraryMultidose, FreeDecayAfterLastDose) {
  const auto p = validate_params(1.0, 0.2, 1.0, 1.0);
  const auto sol = arbitrary_multidose(p, Regimen::arbitrary({{100, 4}, {100, 4}}));
  const double at8 = sol.concentration(8.0);
  const CycleCoefficients c = sol.cycle(2);
  EXPECT_DOUBLE_EQ(sol.concentration(30.0), c.concentration_at(p, 26.0));
  EXPECT_LT(sol.concentration(30.0), at8);
  EXPECT_EQ(sol.cycle_index(30.0), 2u);
}

TEST(ArbitraryMultidose, FlipFlopStaysPositive) {
  const auto p = validate_params(0.1, 1.0, 1.0, 1.0);
  const auto sol = arbitrary_multidose(p, Regimen::arbitrary({{100, 3}, {50, 7}, {200, 2}}));
  for (double t = 0.01; t < 30; t += 0.1) EXPECT_GT(sol.concentration(t), 0.0);
}

TEST(ArbitraryMultidose, GutAmountIsSumOfDecayedDoses) {
  const auto p = validate_params(0.7, 0.1, 1.0);
  const std::vector<DoseEntry> e{{100, 3}, {50, 7}, {200, 2}};
  const auto sol = arbitrary_multidose(p, Regimen::arbitrary(e));
  const double t = 11.5;
  const double expect = 100 * std::exp(-0.7 * t) + 50 * std::exp(-0.7 * (t - 3)) + 200 * std::exp(-0.7 * (t - 10));
  EXPECT_LE(rel_diff(sol.gut_amount(t), expect), 1e-13);
}
