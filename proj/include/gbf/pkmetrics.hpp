#pragma once

// Per-cycle and single-dose summary quantities: AUC, peak time and peak level.

#include <cstddef>

#include "gbf/bateman.hpp"

namespace gbf {

enum class PeakLocation {
  Interior,    // analytic stationary point inside the cycle
  CycleStart,  // x decreasing over the whole cycle
  CycleEnd,    // x still rising when the next dose arrives
};

const char* to_string(PeakLocation loc);

struct Peak {
  double t_max = 0.0;  // absolute time
  double x_max = 0.0;
  PeakLocation location = PeakLocation::Interior;
  /// Offset of the analytic stationary point from the cycle start. May fall
  /// outside [0, tau_n]; NaN when the two-exponential has no stationary point.
  double analytic_offset = 0.0;

  bool inside_cycle() const noexcept { return location == PeakLocation::Interior; }
};

struct CycleMetrics {
  std::size_t n = 1;
  double auc = 0.0;
  Peak peak;
};

/// AUC over I_n for equi-dosing.
double auc_cycle(const ValidatedParams& p, double dose, double tau, std::size_t n);

/// AUC over [0, inf) for one dose; equals dose*gamma / (V*ke).
double auc_single(const ValidatedParams& p, double dose);

/// Peak of cycle n under equi-dosing.
Peak peak(const ValidatedParams& p, double dose, double tau, std::size_t n);

/// Stationary-point offset ln(ka c2 / (ke c1)) / (ka - ke) of c1 e^{-ke u} - c2 e^{-ka u}.
/// NaN when ka c2 / (ke c1) <= 0.
double stationary_offset(const ValidatedParams& p, double c1, double c2);

/// Peak of any cycle, from its coefficients.
Peak cycle_peak(const ValidatedParams& p, const CycleCoefficients& c);

/// Exact integral of the cycle's two-exponential over [t_{n-1}, t_n].
double cycle_auc(const ValidatedParams& p, const CycleCoefficients& c);

CycleMetrics cycle_metrics(const PiecewiseSolution& sol, std::size_t n);

}  // namespace gbf
