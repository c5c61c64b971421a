#pragma once

// Long-run behaviour of equi-dose regimens: therapeutic-range bounds, width,
// limiting AUC and the cycle-to-cycle periodicity gap.

#include <cstddef>

#include "gbf/bateman.hpp"

namespace gbf {

/// Trough of the limiting cycle, lim Rem_x(n).
double ss_lower(const ValidatedParams& p, double dose, double tau);

/// Peak of the limiting cycle, lim x_max(n).
double ss_upper(const ValidatedParams& p, double dose, double tau);

/// ss_upper - ss_lower.
double width(const ValidatedParams& p, double dose, double tau);

/// lim_{tau -> inf} width: the single-dose peak concentration.
double width_limit(const ValidatedParams& p, double dose);

/// lim AUC_{I_n}.
double auc_ss(const ValidatedParams& p, double dose, double tau);

/// Number of grid points used per cycle by periodicity_gap by default.
inline constexpr std::size_t kGapGridPoints = 10000;

/// sup over I_n of |x^(n)(t) - x^(n-1)(t - tau_{n-1})| for n >= 2, measured on a
/// uniform grid over the cycle plus the difference's stationary point.
/// Both cycle formulas are evaluated at the same in-cycle offset.
double periodicity_gap(const PiecewiseSolution& sol, std::size_t n,
                       std::size_t grid_points = kGapGridPoints);

/// The envelope (ka gamma d / (V|ka-ke|)) (alpha^n + beta^n).
double periodicity_envelope(const ValidatedParams& p, double dose, double tau, std::size_t n);

/// A bound that does hold for the measured gap of cycle n >= 2:
/// (ka gamma d / (V|ka-ke|)) max(alpha, beta)^{n-1}.
double periodicity_bound(const ValidatedParams& p, double dose, double tau, std::size_t n);

/// Smallest n >= 2 such that periodicity_gap(m) < eps for every m >= n.
std::size_t n_epsilon(const ValidatedParams& p, double dose, double tau, double eps);

struct AucEquality {
  double auc_single = 0.0;
  double auc_ss = 0.0;
  double rel_diff = 0.0;
};

AucEquality auc_equality_check(const ValidatedParams& p, double dose, double tau);

struct SteadyStateSummary {
  double ss_lower = 0.0;
  double ss_upper = 0.0;
  double width = 0.0;
  double width_limit = 0.0;
  double auc_single = 0.0;
  double auc_ss = 0.0;
  double eps = 0.0;
  std::size_t n_epsilon = 0;
};

SteadyStateSummary summarize_steady_state(const ValidatedParams& p, double dose, double tau,
                                          double eps = 1e-6);

}  // namespace gbf
