#pragma once

// Closed-form oral dynamics: the single-dose Bateman curve and its
// multi-dose generalisation. Within cycle n (t in [t_{n-1}, t_n], u = t - t_{n-1})
//
//   x(t) = C1(n) e^{-ke u} - C2(n) e^{-ka u}
//   y(t) = (Rem_y(n-1) + d_n) e^{-ka u}
//
// with C2(n) = K (Rem_y(n-1) + d_n), C1(n) = C2(n) + Rem_x(n-1) and
// K = ka*gamma / (V (ka - ke)).

#include <cstddef>
#include <optional>
#include <vector>

#include "gbf/core.hpp"

namespace gbf {

struct DecayFactors {
  double alpha = 0.0;  // e^{-ka tau}
  double beta = 0.0;   // e^{-ke tau}
};

DecayFactors decay_factors(const ValidatedParams& p, double tau);

struct CycleCoefficients {
  std::size_t n = 1;
  double c1 = 0.0;
  double c2 = 0.0;
  double y_start = 0.0;  // gut amount right after the dose, mg
  double t_start = 0.0;
  double length = 0.0;   // tau_n

  double t_end() const noexcept { return t_start + length; }

  /// Cycle formula at offset u from the cycle start. Valid for any u >= 0,
  /// including past the cycle end (free decay).
  double concentration_at(const ValidatedParams& p, double u) const;
  double gut_amount_at(const ValidatedParams& p, double u) const;
  /// dx/dt at offset u.
  double slope_at(const ValidatedParams& p, double u) const;
};

struct Remainder {
  double x = 0.0;  // concentration at t_n
  double y = 0.0;  // gut amount at t_n^-
};

struct State {
  double x = 0.0;
  double y = 0.0;
  std::size_t cycle = 1;
};

/// Single oral dose d given at t = 0.
class SingleDose {
 public:
  SingleDose(const ValidatedParams& p, double dose);

  double concentration(double t) const;
  double gut_amount(double t) const;
  double dose() const noexcept { return dose_; }

 private:
  ValidatedParams p_;
  double dose_;
};

SingleDose single_dose(const ValidatedParams& p, double dose);

/// Piecewise closed-form trajectory for a whole regimen. Immutable; all
/// evaluation is const and reentrant.
///
/// Evaluation exactly at a dose time t_n returns the (continuous)
/// concentration and the post-dose gut amount, attributed to cycle n+1.
/// For a finite schedule, times past the last interval continue the last
/// cycle as free decay.
class PiecewiseSolution {
 public:
  const ValidatedParams& params() const noexcept { return p_; }
  const Regimen& regimen() const noexcept { return regimen_; }

  /// Number of cycles; nullopt when the schedule is an unbounded equi-dose one.
  std::optional<std::size_t> cycle_count() const noexcept { return regimen_.size(); }

  CycleCoefficients cycle(std::size_t n) const;

  /// t_n for n >= 0.
  double dose_time(std::size_t n) const;

  /// Cycle that owns time t (>= 0), using the post-dose convention.
  std::size_t cycle_index(double t) const;

  double concentration(double t) const;
  double gut_amount(double t) const;
  State state(double t) const;

  /// (Rem_x(n), Rem_y(n)); n = 0 gives (0, 0).
  Remainder remainder(std::size_t n) const;

  std::vector<double> concentrations(const std::vector<double>& times) const;

 private:
  friend PiecewiseSolution equi_multidose(const ValidatedParams&, double, double);
  friend PiecewiseSolution arbitrary_multidose(const ValidatedParams&, const Regimen&);

  PiecewiseSolution(const ValidatedParams& p, Regimen r);

  CycleCoefficients equi_cycle(std::size_t n) const;
  Remainder equi_remainder(std::size_t n) const;

  ValidatedParams p_;
  Regimen regimen_;
  // Finite schedules only: t_0..t_N, remainders 0..N and coefficients 1..N.
  std::vector<double> times_;
  std::vector<Remainder> remainders_;
  std::vector<CycleCoefficients> cycles_;
};

/// Constant dose d every tau hours, coefficients from the geometric sums.
PiecewiseSolution equi_multidose(const ValidatedParams& p, double dose, double tau);

/// Any regimen; finite schedules are built by the O(n) remainder recursion.
/// An equi-dose regimen is forwarded to equi_multidose.
PiecewiseSolution arbitrary_multidose(const ValidatedParams& p, const Regimen& r);

inline Remainder remainders(const PiecewiseSolution& sol, std::size_t n) { return sol.remainder(n); }

}  // namespace gbf
