#include "gbf/pkmetrics.hpp"

#include <cmath>
#include <limits>

namespace gbf {

const char* to_string(PeakLocation loc) {
  switch (loc) {
    case PeakLocation::Interior: return "interior";
    case PeakLocation::CycleStart: return "cycle_start";
    case PeakLocation::CycleEnd: return "cycle_end";
  }
  return "unknown";
}

double auc_cycle(const ValidatedParams& p, double dose, double tau, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cycle index is 1-based");
  const double nn = static_cast<double>(n);
  // 1 - q^n computed as -expm1(-rate*tau*n).
  const double one_minus_bn = -std::expm1(-p.ke() * tau * nn);
  const double one_minus_an = -std::expm1(-p.ka() * tau * nn);
  return p.amplitude_per_dose() * dose * (one_minus_bn / p.ke() - one_minus_an / p.ka());
}

double auc_single(const ValidatedParams& p, double dose) {
  return p.amplitude_per_dose() * dose * (1.0 / p.ke() - 1.0 / p.ka());
}

double stationary_offset(const ValidatedParams& p, double c1, double c2) {
  const double ratio = (p.ka() * c2) / (p.ke() * c1);
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(ratio) / (p.ka() - p.ke());
}

Peak cycle_peak(const ValidatedParams& p, const CycleCoefficients& c) {
  Peak pk;
  pk.analytic_offset = stationary_offset(p, c.c1, c.c2);
  const double u = pk.analytic_offset;
  if (std::isnan(u) || u <= 0.0) {
    pk.location = PeakLocation::CycleStart;
    pk.t_max = c.t_start;
    pk.x_max = c.concentration_at(p, 0.0);
  } else if (u >= c.length) {
    pk.location = PeakLocation::CycleEnd;
    pk.t_max = c.t_end();
    pk.x_max = c.concentration_at(p, c.length);
  } else {
    // Closed form at the stationary point: r = ka c2 / (ke c1).
    const double r = (p.ka() * c.c2) / (p.ke() * c.c1);
    const double dk = p.ka() - p.ke();
    pk.location = PeakLocation::Interior;
    pk.t_max = c.t_start + u;
    pk.x_max = c.c1 * std::pow(r, -p.ke() / dk) - c.c2 * std::pow(r, -p.ka() / dk);
  }
  return pk;
}

Peak peak(const ValidatedParams& p, double dose, double tau, std::size_t n) {
  return cycle_peak(p, equi_multidose(p, dose, tau).cycle(n));
}

double cycle_auc(const ValidatedParams& p, const CycleCoefficients& c) {
  const double b = -std::expm1(-p.ke() * c.length);
  const double a = -std::expm1(-p.ka() * c.length);
  return c.c1 * b / p.ke() - c.c2 * a / p.ka();
}

CycleMetrics cycle_metrics(const PiecewiseSolution& sol, std::size_t n) {
  const CycleCoefficients c = sol.cycle(n);
  return {n, cycle_auc(sol.params(), c), cycle_peak(sol.params(), c)};
}

}  // namespace gbf
