#pragma once

// Regimen design: find the unique (d*, tau*) whose limiting cycle has a
// prescribed trough and peak.

#include <cstddef>
#include <optional>

#include "gbf/core.hpp"

namespace gbf {

/// Clinical window [mic, tc] and the steady-state bounds to hit inside it.
struct TherapeuticTarget {
  double mic = 0.0;
  double tc = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Throws Error{InvalidTarget} unless 0 < mic <= lower < upper <= tc.
void validate_target(const TherapeuticTarget& t);

/// Shape functions of the steady-state bounds with rates ordered so that
/// ka_eff > ke_eff. Both bounds scale as K*d times psi (trough) or phi (peak).
class SolverContext {
 public:
  explicit SolverContext(const ValidatedParams& p);

  double ka_eff() const noexcept { return ka_; }
  double ke_eff() const noexcept { return ke_; }
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  double p3() const noexcept { return p3_; }
  double p4() const noexcept { return p4_; }

  double psi(double tau) const;
  double phi(double tau) const;
  double f(double tau) const;
  /// f(tau) - 1 without cancellation; f - 1 shrinks like tau^2 as tau -> 0.
  double f_minus_one(double tau) const;

 private:
  double ka_, ke_;
  double p1_, p2_, p3_, p4_;
};

/// Peak-to-trough ratio of the limiting cycle; independent of dose.
double f_ratio(const ValidatedParams& p, double tau);
double f_ratio_minus_one(const ValidatedParams& p, double tau);

struct Design {
  double d_star = 0.0;
  double tau_star = 0.0;
  double achieved_lower = 0.0;
  double achieved_upper = 0.0;
  std::size_t iterations = 0;
  double f_residual = 0.0;  // |f(tau*) - ratio| / (ratio - 1)
};

inline constexpr std::size_t kDesignMaxIterations = 200;
inline constexpr double kDesignRatioTolerance = 1e-12;
inline constexpr double kDesignVerifyTolerance = 1e-8;

/// Solve for exact bounds (lower, upper). Throws TargetRatioOutOfRange when
/// upper/lower <= 1 and NoConvergence if the bracket or the peak check fails.
Design design(const ValidatedParams& p, double lower, double upper);

/// validate_target, then design for (target.lower, target.upper).
Design design(const ValidatedParams& p, const TherapeuticTarget& target);

/// ss_lower >= mic and ss_upper <= tc.
bool feasible_set_check(const ValidatedParams& p, double dose, double tau,
                        const TherapeuticTarget& target);

struct RoundedDesign {
  double dose = 0.0;
  double tau = 0.0;
  double ss_lower = 0.0;
  double ss_upper = 0.0;
  bool feasible = false;
};

/// Snap a design to the nearest multiples of the given steps (either may be
/// absent) and re-check it against [mic, tc].
RoundedDesign round_design(const ValidatedParams& p, const Design& d, const TherapeuticTarget& target,
                           std::optional<double> dose_step, std::optional<double> tau_step);

}  // namespace gbf
