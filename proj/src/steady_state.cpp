#include "gbf/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "gbf/pkmetrics.hpp"

namespace gbf {

double ss_lower(const ValidatedParams& p, double dose, double tau) {
  // beta/(1-beta) - alpha/(1-alpha) = 1/expm1(ke tau) - 1/expm1(ka tau)
  return p.amplitude_per_dose() * dose *
         (1.0 / std::expm1(p.ke() * tau) - 1.0 / std::expm1(p.ka() * tau));
}

double ss_upper(const ValidatedParams& p, double dose, double tau) {
  const double kd = p.amplitude_per_dose() * dose;
  const double w = -std::expm1(-p.ke() * tau);  // 1 - beta
  const double z = -std::expm1(-p.ka() * tau);  // 1 - alpha
  const double dk = p.ka() - p.ke();
  const double log_r = std::log(p.ka() / p.ke()) + std::log(w / z);
  return kd * (std::exp(-p.ke() / dk * log_r) / w - std::exp(-p.ka() / dk * log_r) / z);
}

double width(const ValidatedParams& p, double dose, double tau) {
  return ss_upper(p, dose, tau) - ss_lower(p, dose, tau);
}

double width_limit(const ValidatedParams& p, double dose) {
  const double dk = p.ka() - p.ke();
  const double ratio = p.ka() / p.ke();
  return p.amplitude_per_dose() * dose *
         (std::pow(ratio, -p.ke() / dk) - std::pow(ratio, -p.ka() / dk));
}

double auc_ss(const ValidatedParams& p, double dose, double /*tau*/) {
  // Limit of auc_cycle as n -> inf: the geometric factors 1 - q^n tend to 1.
  return p.amplitude_per_dose() * dose * (1.0 / p.ke() - 1.0 / p.ka());
}

double periodicity_gap(const PiecewiseSolution& sol, std::size_t n, std::size_t grid_points) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "periodicity gap compares cycles n >= 2");
  if (grid_points < 2) throw Error(ErrorCode::InvalidArgument, "gap grid needs >= 2 points");
  const ValidatedParams& p = sol.params();
  const CycleCoefficients cur = sol.cycle(n);
  const CycleCoefficients prev = sol.cycle(n - 1);

  // Difference of the two cycle formulas at a common offset u.
  const double a = cur.c1 - prev.c1;
  const double b = cur.c2 - prev.c2;
  auto diff = [&](double u) {
    return std::abs(a * std::exp(-p.ke() * u) - b * std::exp(-p.ka() * u));
  };

  double sup = 0.0;
  const double len = cur.length;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double u = len * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    sup = std::max(sup, diff(u));
  }
  const double u_star = stationary_offset(p, a, b);
  if (std::isfinite(u_star) && u_star > 0.0 && u_star < len) sup = std::max(sup, diff(u_star));
  return sup;
}

double periodicity_envelope(const ValidatedParams& p, double dose, double tau, std::size_t n) {
  const DecayFactors f = decay_factors(p, tau);
  const double nn = static_cast<double>(n);
  return std::abs(p.amplitude_per_dose()) * dose * (std::pow(f.alpha, nn) + std::pow(f.beta, nn));
}

double periodicity_bound(const ValidatedParams& p, double dose, double tau, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "cycle index is 1-based");
  const double slow = std::min(p.ka(), p.ke());
  return std::abs(p.amplitude_per_dose()) * dose *
         std::exp(-slow * tau * static_cast<double>(n - 1));
}

std::size_t n_epsilon(const ValidatedParams& p, double dose, double tau, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  // Past n_cut the bound alone guarantees gap < eps.
  const double kd = std::abs(p.amplitude_per_dose()) * dose;
  const double slow = std::min(p.ka(), p.ke());
  std::size_t n_cut = 2;
  if (kd >= eps) {
    n_cut = static_cast<std::size_t>(std::floor(std::log(kd / eps) / (slow * tau))) + 2;
    while (periodicity_bound(p, dose, tau, n_cut) >= eps) ++n_cut;
  }
  const PiecewiseSolution sol = equi_multidose(p, dose, tau);
  std::size_t last_violation = 1;
  for (std::size_t n = 2; n < n_cut; ++n) {
    if (periodicity_gap(sol, n) >= eps) last_violation = n;
  }
  return last_violation + 1;
}

AucEquality auc_equality_check(const ValidatedParams& p, double dose, double tau) {
  AucEquality r;
  r.auc_single = auc_single(p, dose);
  r.auc_ss = auc_ss(p, dose, tau);
  r.rel_diff = std::abs(r.auc_ss - r.auc_single) / std::abs(r.auc_single);
  return r;
}

SteadyStateSummary summarize_steady_state(const ValidatedParams& p, double dose, double tau,
                                          double eps) {
  SteadyStateSummary s;
  s.ss_lower = ss_lower(p, dose, tau);
  s.ss_upper = ss_upper(p, dose, tau);
  s.width = s.ss_upper - s.ss_lower;
  s.width_limit = width_limit(p, dose);
  s.auc_single = auc_single(p, dose);
  s.auc_ss = auc_ss(p, dose, tau);
  s.eps = eps;
  s.n_epsilon = n_epsilon(p, dose, tau, eps);
  return s;
}

}  // namespace gbf
