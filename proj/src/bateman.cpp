#include "gbf/bateman.hpp"

#include <algorithm>
#include <cmath>

namespace gbf {

namespace {

// (1 - q^n) / (1 - q) for q = e^{-rate*tau}, stable for q close to 1.
double geometric_sum(double rate, double tau, std::size_t n) {
  return std::expm1(-rate * tau * static_cast<double>(n)) / std::expm1(-rate * tau);
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "evaluation time must be finite and >= 0");
}

}  // namespace

DecayFactors decay_factors(const ValidatedParams& p, double tau) {
  return {std::exp(-p.ka() * tau), std::exp(-p.ke() * tau)};
}

double CycleCoefficients::concentration_at(const ValidatedParams& p, double u) const {
  return c1 * std::exp(-p.ke() * u) - c2 * std::exp(-p.ka() * u);
}

double CycleCoefficients::gut_amount_at(const ValidatedParams& p, double u) const {
  return y_start * std::exp(-p.ka() * u);
}

double CycleCoefficients::slope_at(const ValidatedParams& p, double u) const {
  return -p.ke() * c1 * std::exp(-p.ke() * u) + p.ka() * c2 * std::exp(-p.ka() * u);
}

SingleDose::SingleDose(const ValidatedParams& p, double dose) : p_(p), dose_(dose) {
  if (!(dose > 0.0)) throw Error(ErrorCode::InvalidArgument, "dose must be positive");
}

double SingleDose::concentration(double t) const {
  require_time(t);
  return p_.amplitude_per_dose() * dose_ * (std::exp(-p_.ke() * t) - std::exp(-p_.ka() * t));
}

double SingleDose::gut_amount(double t) const {
  require_time(t);
  return dose_ * std::exp(-p_.ka() * t);
}

SingleDose single_dose(const ValidatedParams& p, double dose) { return SingleDose(p, dose); }

PiecewiseSolution::PiecewiseSolution(const ValidatedParams& p, Regimen r)
    : p_(p), regimen_(std::move(r)) {}

PiecewiseSolution equi_multidose(const ValidatedParams& p, double dose, double tau) {
  return PiecewiseSolution(p, Regimen::equi(dose, tau));
}

PiecewiseSolution arbitrary_multidose(const ValidatedParams& p, const Regimen& r) {
  if (r.is_equi()) return equi_multidose(p, r.as_equi().dose, r.as_equi().interval);

  PiecewiseSolution sol(p, r);
  const auto& entries = r.entries();
  const std::size_t count = entries.size();
  const double k = p.amplitude_per_dose();

  sol.times_ = dose_times(r);
  sol.remainders_.reserve(count + 1);
  sol.cycles_.reserve(count);
  sol.remainders_.push_back({0.0, 0.0});

  for (std::size_t n = 1; n <= count; ++n) {
    const Remainder prev = sol.remainders_.back();
    const DoseEntry& e = entries[n - 1];
    const DecayFactors f = decay_factors(p, e.interval);

    CycleCoefficients c;
    c.n = n;
    c.y_start = prev.y + e.dose;
    c.c2 = k * c.y_start;
    c.c1 = c.c2 + prev.x;
    c.t_start = sol.times_[n - 1];
    c.length = e.interval;
    sol.cycles_.push_back(c);
    sol.remainders_.push_back({c.c1 * f.beta - c.c2 * f.alpha, c.y_start * f.alpha});
  }
  return sol;
}

CycleCoefficients PiecewiseSolution::equi_cycle(std::size_t n) const {
  const auto& eq = regimen_.as_equi();
  const double kd = p_.amplitude_per_dose() * eq.dose;
  CycleCoefficients c;
  c.n = n;
  c.c1 = kd * geometric_sum(p_.ke(), eq.interval, n);
  c.c2 = kd * geometric_sum(p_.ka(), eq.interval, n);
  c.y_start = eq.dose * geometric_sum(p_.ka(), eq.interval, n);
  c.t_start = static_cast<double>(n - 1) * eq.interval;
  c.length = eq.interval;
  return c;
}

Remainder PiecewiseSolution::equi_remainder(std::size_t n) const {
  if (n == 0) return {};
  const auto& eq = regimen_.as_equi();
  const DecayFactors f = decay_factors(p_, eq.interval);
  const double kd = p_.amplitude_per_dose() * eq.dose;
  const double sb = geometric_sum(p_.ke(), eq.interval, n);
  const double sa = geometric_sum(p_.ka(), eq.interval, n);
  return {kd * (f.beta * sb - f.alpha * sa), eq.dose * f.alpha * sa};
}

CycleCoefficients PiecewiseSolution::cycle(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cycle index is 1-based");
  if (regimen_.is_equi()) return equi_cycle(n);
  if (n > cycles_.size()) throw Error(ErrorCode::InvalidArgument, "cycle beyond schedule");
  return cycles_[n - 1];
}

double PiecewiseSolution::dose_time(std::size_t n) const {
  if (regimen_.is_equi()) return static_cast<double>(n) * regimen_.as_equi().interval;
  if (n >= times_.size()) throw Error(ErrorCode::InvalidArgument, "dose index beyond schedule");
  return times_[n];
}

std::size_t PiecewiseSolution::cycle_index(double t) const {
  require_time(t);
  if (regimen_.is_equi()) {
    return static_cast<std::size_t>(std::floor(t / regimen_.as_equi().interval)) + 1;
  }
  // Dose times t_0..t_{N-1}; the count of those <= t is the owning cycle.
  const auto last_dose = times_.begin() + static_cast<long>(cycles_.size());
  return static_cast<std::size_t>(std::upper_bound(times_.begin(), last_dose, t) - times_.begin());
}

double PiecewiseSolution::concentration(double t) const {
  const CycleCoefficients c = cycle(cycle_index(t));
  return c.concentration_at(p_, t - c.t_start);
}

double PiecewiseSolution::gut_amount(double t) const {
  const CycleCoefficients c = cycle(cycle_index(t));
  return c.gut_amount_at(p_, t - c.t_start);
}

State PiecewiseSolution::state(double t) const {
  const std::size_t n = cycle_index(t);
  const CycleCoefficients c = cycle(n);
  const double u = t - c.t_start;
  return {c.concentration_at(p_, u), c.gut_amount_at(p_, u), n};
}

Remainder PiecewiseSolution::remainder(std::size_t n) const {
  if (regimen_.is_equi()) return equi_remainder(n);
  if (n >= remainders_.size()) throw Error(ErrorCode::InvalidArgument, "cycle beyond schedule");
  return remainders_[n];
}

std::vector<double> PiecewiseSolution::concentrations(const std::vector<double>& times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(concentration(t));
  return out;
}

}  // namespace gbf
