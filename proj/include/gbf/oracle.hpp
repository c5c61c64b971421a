#pragma once

// Reference implementations for cross-checking the closed forms. Nothing here
// calls into bateman or extmodels.
//
//   y' = -ka y            (absorption active)
//   x' = c y - ke x       (c = ka gamma / V)
//
// with instantaneous state changes at impulse times.

#include <cstddef>
#include <vector>

#include "gbf/core.hpp"
#include "gbf/extmodels.hpp"

namespace gbf {

struct Impulse {
  double time = 0.0;
  double dy = 0.0;       // added to the gut amount
  double dx = 0.0;       // added to the concentration
  bool reset_y = false;  // gut emptied before dy is added
};

struct OracleConfig {
  double step = 1e-3;             // fixed RK4 step, hours
  std::vector<Impulse> impulses;  // extra impulses merged with the regimen's
};

/// Grid samples. At an impulse time only the post-impulse state is stored.
struct OdeTrajectory {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> y;
};

/// Fixed-step RK4 from x = y = 0 at t = 0. Steps never straddle an impulse:
/// each segment between impulses is divided into equal steps no longer than
/// `step`. Throws StepTooLarge if step > (shortest gap between impulses)/10.
OdeTrajectory integrate_impulsive(double ka, double ke, double coupling,
                                  std::vector<Impulse> impulses, double t_end, double step);

/// Oral regimen: dose d_n enters the gut at t_{n-1}.
OdeTrajectory integrate_ode(const ValidatedParams& p, const Regimen& r, double t_end,
                            const OracleConfig& cfg = {});

/// FAT regimen: gut set to d_n at t_{n-1}, emptied at s_n.
OdeTrajectory integrate_fat(const ValidatedParams& p, const FatRegimen& r, double t_end,
                            const OracleConfig& cfg = {});

/// Bolus regimen: x jumps by delta_n at t_{n-1}.
OdeTrajectory integrate_bolus(double ke, const BolusRegimen& r, double t_end,
                              const OracleConfig& cfg = {});

/// Sum of time-shifted single-dose curves.
class Superposition {
 public:
  Superposition(const PkParams& p, std::vector<double> dose_times, std::vector<double> doses);

  double concentration(double t) const;
  double gut_amount(double t) const;

 private:
  PkParams p_;
  std::vector<double> times_;
  std::vector<double> doses_;
};

/// Equi-dose schedules are expanded to every dose given before t_max.
Superposition superpose(const ValidatedParams& p, const Regimen& r, double t_max = 0.0);

/// Sum of delta_n e^{-ke (t - t_{n-1})} over doses given by t.
double superpose_bolus(double ke, const BolusRegimen& r, double t);

/// Sum over doses of Bateman curves cut off at s_n and decaying afterwards.
double superpose_fat(const ValidatedParams& p, const FatRegimen& r, double t);

}  // namespace gbf
