#include "gbf/dosing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gbf/steady_state.hpp"

namespace gbf {

namespace {

// ln(sinh(v)/v) for v >= 0.
double log_sinhc(double v) {
  if (v < 0.1) {
    const double v2 = v * v;
    return v2 * (1.0 / 6 + v2 * (-1.0 / 180 + v2 * (1.0 / 2835 + v2 * (-1.0 / 37800 + v2 / 467775))));
  }
  if (v < 20.0) {
    const long double lv = v;
    return static_cast<double>(std::log(std::sinh(lv) / lv));
  }
  return v - std::log(2.0 * v) + std::log1p(-std::exp(-2.0 * v));
}

// ln(expm1(u)/u) for u >= 0.
double log_h(double u) { return 0.5 * u + log_sinhc(0.5 * u); }

// (e^{-u} - 1 + u) / u for u >= 0; increases from 0 to 1.
double defect(double u) {
  if (u < 0.1) {
    double term = u / 2.0, sum = term;
    for (int k = 3; k <= 12; ++k) {
      term *= -u / k;
      sum += term;
    }
    return sum;
  }
  const long double lu = u;
  return static_cast<double>((std::expm1(-lu) + lu) / lu);
}

double one_minus_exp(double u) { return -std::expm1(-u); }

}  // namespace

void validate_target(const TherapeuticTarget& t) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidTarget, msg); };
  if (!(t.mic > 0.0) || !std::isfinite(t.mic)) fail("mic must be positive");
  if (!(t.tc > t.mic) || !std::isfinite(t.tc)) fail("tc must exceed mic");
  if (!(t.lower >= t.mic)) fail("target lower bound is below mic");
  if (!(t.upper <= t.tc)) fail("target upper bound is above tc");
  if (!(t.lower < t.upper)) fail("target lower bound must be below the upper bound");
}

SolverContext::SolverContext(const ValidatedParams& p)
    : ka_(std::max(p.ka(), p.ke())), ke_(std::min(p.ka(), p.ke())) {
  const double dk = ka_ - ke_;
  p1_ = -ka_ / dk;
  p2_ = -ke_ / dk;
  p3_ = std::pow(ka_ / ke_, p1_);
  p4_ = std::pow(ka_ / ke_, p2_);
}

double SolverContext::psi(double tau) const {
  return 1.0 / std::expm1(ke_ * tau) - 1.0 / std::expm1(ka_ * tau);
}

double SolverContext::phi(double tau) const {
  const double w = -std::expm1(-ke_ * tau);
  const double z = -std::expm1(-ka_ * tau);
  const double log_g = std::log(ka_ / ke_) + std::log(w / z);
  return std::exp(p2_ * log_g) / w - std::exp(p1_ * log_g) / z;
}

double SolverContext::f_minus_one(double tau) const {
  const double a = ka_, e = ke_;
  // ln r with r = a(1-beta) / (e(1-alpha)); a(1-beta) - e(1-alpha) = a e tau (defect(a tau) - defect(e tau)).
  const double num = a * e * tau * (defect(a * tau) - defect(e * tau));
  const double log_r = std::log1p(num / (e * one_minus_exp(a * tau)));
  const double t_max = log_r / (a - e);  // steady-state peak offset
  const double rest = tau - t_max;
  const double d = (log_h(e * rest) - log_h(a * rest)) - (log_h(e * tau) - log_h(a * tau));
  const double trough = 1.0 / one_minus_exp(e * tau) - std::exp(-(a - e) * tau) / one_minus_exp(a * tau);
  return std::expm1(d) * (one_minus_exp(a * rest) / one_minus_exp(a * tau)) *
         std::exp(e * tau - a * t_max) / trough;
}

double SolverContext::f(double tau) const { return 1.0 + f_minus_one(tau); }

double f_ratio(const ValidatedParams& p, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  return SolverContext(p).f(tau);
}

double f_ratio_minus_one(const ValidatedParams& p, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  return SolverContext(p).f_minus_one(tau);
}

Design design(const ValidatedParams& p, double lower, double upper) {
  if (!(lower > 0.0) || !std::isfinite(lower) || !std::isfinite(upper))
    throw Error(ErrorCode::InvalidTarget, "target bounds must be positive and finite");
  // Solve f(tau) - 1 = (upper - lower) / lower so ratios close to 1 keep their digits.
  const double excess = (upper - lower) / lower;
  if (!(excess > 0.0)) throw Error(ErrorCode::TargetRatioOutOfRange, "upper/lower must exceed 1");

  const SolverContext ctx(p);
  auto bracket_error = [](double lo, double hi, const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << what << "; final bracket [" << lo << ", " << hi << "]";
    return Error(ErrorCode::NoConvergence, os.str());
  };

  double lo = 1e-9;
  double hi = 1.0;
  std::size_t iterations = 0;
  while (!(ctx.f_minus_one(hi) >= excess)) {
    lo = hi;
    hi *= 2.0;
    if (++iterations > kDesignMaxIterations || !std::isfinite(hi))
      throw bracket_error(lo, hi, "could not bracket the target ratio");
  }
  if (ctx.f_minus_one(lo) > excess) throw bracket_error(lo, hi, "target ratio below the bracket floor");

  // Geometric bisection: tau* may sit many decades below the initial upper end.
  double tau = std::sqrt(lo * hi);
  double residual = std::abs(ctx.f_minus_one(tau) - excess) / excess;
  for (std::size_t i = 0; i < kDesignMaxIterations; ++i) {
    ++iterations;
    tau = std::sqrt(lo * hi);
    const double ft = ctx.f_minus_one(tau);
    residual = std::abs(ft - excess) / excess;
    if (residual <= kDesignRatioTolerance) break;
    if (ft < excess) lo = tau; else hi = tau;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }

  Design d;
  d.tau_star = tau;
  d.d_star = lower / ss_lower(p, 1.0, tau);
  d.achieved_lower = ss_lower(p, d.d_star, tau);
  d.achieved_upper = ss_upper(p, d.d_star, tau);
  d.iterations = iterations;
  d.f_residual = residual;
  if (!(std::abs(d.achieved_upper - upper) <= kDesignVerifyTolerance * upper))
    throw bracket_error(lo, hi, "designed regimen misses the upper bound");
  return d;
}

Design design(const ValidatedParams& p, const TherapeuticTarget& target) {
  validate_target(target);
  return design(p, target.lower, target.upper);
}

bool feasible_set_check(const ValidatedParams& p, double dose, double tau,
                        const TherapeuticTarget& target) {
  return ss_lower(p, dose, tau) >= target.mic && ss_upper(p, dose, tau) <= target.tc;
}

RoundedDesign round_design(const ValidatedParams& p, const Design& d, const TherapeuticTarget& target,
                           std::optional<double> dose_step, std::optional<double> tau_step) {
  auto snap = [](double v, std::optional<double> step) {
    if (!step) return v;
    if (!(*step > 0.0)) throw Error(ErrorCode::InvalidArgument, "rounding step must be positive");
    return std::max(*step, std::round(v / *step) * *step);
  };
  RoundedDesign r;
  r.dose = snap(d.d_star, dose_step);
  r.tau = snap(d.tau_star, tau_step);
  r.ss_lower = ss_lower(p, r.dose, r.tau);
  r.ss_upper = ss_upper(p, r.dose, r.tau);
  r.feasible = r.ss_lower >= target.mic && r.ss_upper <= target.tc;
  return r;
}

}  // namespace gbf
