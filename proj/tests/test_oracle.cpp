#include <gtest/gtest.h>

#include "gbf/bateman.hpp"
#include "gbf/extmodels.hpp"
#include "gbf/oracle.hpp"
#include "test_support.hpp"

using namespace gbf;
using gbf::testing::rel_diff;

namespace {

double max_rel_error(const OdeTrajectory& tr, auto&& exact) {
  double worst = 0;
  for (std::size_t i = 1; i < tr.t.size(); ++i) worst = std::max(worst, rel_diff(tr.x[i], exact(tr.t[i])));
  return worst;
}

}  // namespace

TEST(Rk4, SingleDoseAtDefaultStep) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const SingleDose sd(p, 250);
  const OdeTrajectory tr = integrate_ode(p, Regimen::arbitrary({{250, 48}}), 48);
  EXPECT_LE(max_rel_error(tr, [&](double t) { return sd.concentration(t); }), 1e-8);
  EXPECT_DOUBLE_EQ(tr.t.back(), 48.0);
}

TEST(Rk4, EquiDoseTenCycles) {
  const auto p = validate_params(1.0, 0.1, 1.0, 1.0);
  const auto sol = equi_multidose(p, 100, 6);
  const OdeTrajectory tr = integrate_ode(p, Regimen::equi(100, 6), 60);
  EXPECT_LE(max_rel_error(tr, [&](double t) { return sol.concentration(t); }), 1e-6);
}

TEST(Rk4, FourthOrderConvergence) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const auto sol = arbitrary_multidose(p, Regimen::arbitrary({{250, 4}, {250, 8}, {500, 4}, {250, 4}}));
  const Regimen r = sol.regimen();
  auto err = [&](double h) {
    OracleConfig cfg;
    cfg.step = h;
    const OdeTrajectory tr = integrate_ode(p, r, 20, cfg);
    double worst = 0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) worst = std::max(worst, std::abs(tr.x[i] - sol.concentration(tr.t[i])));
    return worst;
  };
  const double ratio = err(0.04) / err(0.02);
  EXPECT_GT(ratio, 8.0);
  EXPECT_LT(ratio, 32.0);
}

TEST(Rk4, ZeroDoseGivesZero) {
  const OdeTrajectory tr = integrate_impulsive(1.0, 0.1, 1.0, {{0.0, 0.0, 0.0, false}, {5.0, 0.0, 0.0, false}}, 10, 1e-2);
  for (double x : tr.x) EXPECT_EQ(x, 0.0);
  const OdeTrajectory none = integrate_impulsive(1.0, 0.1, 1.0, {}, 10, 1e-2);
  for (double x : none.x) EXPECT_EQ(x, 0.0);
}

TEST(Rk4, StepTooLarge) {
  const auto p = validate_params(1.0, 0.1, 1.0);
  OracleConfig cfg;
  cfg.step = 0.5;
  try {
    integrate_ode(p, Regimen::equi(100, 4), 40, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepTooLarge);
  }
}

TEST(Rk4, ImpulsesLandOnGridPoints) {
  const auto p = validate_params(1.0, 0.1, 1.0);
  OracleConfig cfg;
  cfg.step = 0.3;  // does not divide the 7 h interval
  const OdeTrajectory tr = integrate_ode(p, Regimen::arbitrary({{100, 7}, {100, 7}}), 14, cfg);
  EXPECT_NE(std::find(tr.t.begin(), tr.t.end(), 7.0), tr.t.end());
  const auto i = static_cast<std::size_t>(std::find(tr.t.begin(), tr.t.end(), 7.0) - tr.t.begin());
  EXPECT_GT(tr.y[i], 100.0);  // post-dose value is stored
}

TEST(Rk4, FatClearancePhase) {
  const auto p = validate_params(0.42, 0.4, 0.00449, 1.0);
  const FatRegimen r = FatRegimen::equi(600, 5, 2, 6);
  const FatSolution s = fat_multidose(p, r);
  const OdeTrajectory tr = integrate_fat(p, r, 30);
  double worst = 0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (s.phase(tr.t[i]) == FatPhase::Clearance) EXPECT_EQ(tr.y[i], 0.0);
    worst = std::max(worst, std::abs(tr.x[i] - s.concentration(tr.t[i])));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(Rk4, Bolus) {
  const BolusRegimen r({{600, 4}, {600, 4}, {700, 8}, {500, 4}, {400, 6}, {300, 4}});
  const BolusSolution s = bolus_multidose(0.3838, r);
  const OdeTrajectory tr = integrate_bolus(0.3838, r, 30);
  EXPECT_LE(max_rel_error(tr, [&](double t) { return s.concentration(t); }), 1e-10);
}

TEST(Superpose, EquiDose) {
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const auto sol = equi_multidose(p, 250, 12);
  const Superposition sup = superpose(p, Regimen::equi(250, 12), 240);
  for (double t = 0; t < 240; t += 0.7) {
    EXPECT_LE(std::abs(sol.concentration(t) - sup.concentration(t)), 1e-10);
    EXPECT_LE(std::abs(sol.gut_amount(t) - sup.gut_amount(t)), 1e-10);
  }
}

TEST(Superpose, SkippedDoseRegimen) {
  // Third 250 mg dose skipped, 500 mg at the next slot.
  std::vector<DoseEntry> e{{250, 4}, {250, 8}, {500, 4}};
  for (int i = 0; i < 9; ++i) e.push_back({250, 4});
  const auto p = validate_params(0.748, 0.2031, 19.1933);
  const Regimen r = Regimen::arbitrary(e);
  const auto sol = arbitrary_multidose(p, r);
  const Superposition sup = superpose(p, r);
  for (double t = 0; t < 60; t += 0.1) EXPECT_LE(std::abs(sol.concentration(t) - sup.concentration(t)), 1e-10);
}

TEST(Superpose, SingleEntryIsSingleDose) {
  const auto p = validate_params(0.3, 0.9, 2.0);
  const SingleDose sd(p, 100);
  const Superposition sup = superpose(p, Regimen::arbitrary({{100, 10}}));
  for (double t = 0; t < 30; t += 0.5) EXPECT_LE(std::abs(sd.concentration(t) - sup.concentration(t)), 1e-15);
}
