#include "gbf/extmodels.hpp"

#include <algorithm>
#include <cmath>

namespace gbf {

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "evaluation time must be finite and >= 0");
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

BolusRegimen::BolusRegimen(std::vector<BolusEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidRegimen, "bolus regimen is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!positive(entries_[i].delta) || !positive(entries_[i].interval))
      throw Error(ErrorCode::InvalidRegimen,
                  "bolus entry " + std::to_string(i + 1) + ": delta and interval must be positive");
  }
}

BolusRegimen BolusRegimen::equi(double delta, double interval, std::size_t count) {
  return BolusRegimen(std::vector<BolusEntry>(count, BolusEntry{delta, interval}));
}

BolusSolution bolus_multidose(double ke, const BolusRegimen& r) {
  if (!positive(ke)) throw Error(ErrorCode::NonPositiveParameter, "ke must be positive");
  BolusSolution s;
  s.ke_ = ke;
  s.times_.push_back(0.0);
  s.remainders_.push_back(0.0);
  for (const auto& e : r.entries()) {
    const double amp = s.remainders_.back() + e.delta;
    s.amplitudes_.push_back(amp);
    s.remainders_.push_back(amp * std::exp(-ke * e.interval));
    s.times_.push_back(s.times_.back() + e.interval);
  }
  return s;
}

double BolusSolution::amplitude(std::size_t n) const {
  if (n == 0 || n > amplitudes_.size()) throw Error(ErrorCode::InvalidArgument, "cycle out of range");
  return amplitudes_[n - 1];
}

double BolusSolution::remainder(std::size_t n) const {
  if (n >= remainders_.size()) throw Error(ErrorCode::InvalidArgument, "cycle out of range");
  return remainders_[n];
}

double BolusSolution::dose_time(std::size_t n) const {
  if (n >= times_.size()) throw Error(ErrorCode::InvalidArgument, "dose index out of range");
  return times_[n];
}

std::size_t BolusSolution::cycle_index(double t) const {
  require_time(t);
  const auto last = times_.begin() + static_cast<long>(amplitudes_.size());
  return static_cast<std::size_t>(std::upper_bound(times_.begin(), last, t) - times_.begin());
}

double BolusSolution::concentration(double t) const {
  const std::size_t n = cycle_index(t);
  return amplitudes_[n - 1] * std::exp(-ke_ * (t - times_[n - 1]));
}

double BolusSolution::concentration_before(double t) const {
  require_time(t);
  if (t == 0.0) return 0.0;
  const auto last = times_.begin() + static_cast<long>(amplitudes_.size());
  const auto n = static_cast<std::size_t>(std::lower_bound(times_.begin(), last, t) - times_.begin());
  return amplitudes_[n - 1] * std::exp(-ke_ * (t - times_[n - 1]));
}

double bolus_equi_remainder(double ke, double delta, double tau, std::size_t n) {
  const double beta = std::exp(-ke * tau);
  return delta * beta * std::expm1(-ke * tau * static_cast<double>(n)) / std::expm1(-ke * tau);
}

double bolus_steady_remainder(double ke, double delta, double tau) {
  return delta / std::expm1(ke * tau);
}

FatRegimen::FatRegimen(std::vector<FatEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::InvalidRegimen, "FAT regimen is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const std::string where = "FAT entry " + std::to_string(i + 1) + ": ";
    if (!positive(e.dose) || !positive(e.interval))
      throw Error(ErrorCode::InvalidRegimen, where + "dose and interval must be positive");
    if (!positive(e.s_offset) || e.s_offset > e.interval)
      throw Error(ErrorCode::InvalidRegimen, where + "absorption offset must lie in (0, interval]");
  }
}

FatRegimen FatRegimen::equi(double dose, double interval, double s_offset, std::size_t count) {
  return FatRegimen(std::vector<FatEntry>(count, FatEntry{dose, interval, s_offset}));
}

const char* to_string(FatPhase p) {
  return p == FatPhase::Assimilation ? "assimilation" : "clearance";
}

FatSolution fat_multidose(const ValidatedParams& p, const FatRegimen& r) {
  FatSolution sol(p);
  const double k = p.amplitude_per_dose();
  double t = 0.0;
  double rem2 = 0.0;
  std::size_t n = 1;
  for (const auto& e : r.entries()) {
    FatCycle c;
    c.n = n++;
    c.t_start = t;
    c.s = t + e.s_offset;
    c.t_end = t + e.interval;
    c.dose = e.dose;
    c.c2 = k * e.dose;
    c.c1 = c.c2 + rem2;
    const double a = std::exp(-p.ka() * e.s_offset);
    const double b = std::exp(-p.ke() * e.s_offset);
    c.rem1 = c.c1 * b - c.c2 * a;
    c.rem2 = c.rem1 * std::exp(-p.ke() * (e.interval - e.s_offset));
    sol.cycles_.push_back(c);
    rem2 = c.rem2;
    t = c.t_end;
  }
  return sol;
}

const FatCycle& FatSolution::cycle(std::size_t n) const {
  if (n == 0 || n > cycles_.size()) throw Error(ErrorCode::InvalidArgument, "cycle out of range");
  return cycles_[n - 1];
}

double FatSolution::rem2(std::size_t n) const { return n == 0 ? 0.0 : cycle(n).rem2; }

std::size_t FatSolution::cycle_index(double t) const {
  require_time(t);
  const auto it = std::upper_bound(cycles_.begin(), cycles_.end(), t,
                                   [](double v, const FatCycle& c) { return v < c.t_start; });
  return static_cast<std::size_t>(it - cycles_.begin());
}

FatPhase FatSolution::phase(double t) const {
  const FatCycle& c = cycles_[cycle_index(t) - 1];
  return t < c.s ? FatPhase::Assimilation : FatPhase::Clearance;
}

double FatSolution::concentration(double t) const {
  const FatCycle& c = cycles_[cycle_index(t) - 1];
  if (t < c.s) {
    const double u = t - c.t_start;
    return c.c1 * std::exp(-p_.ke() * u) - c.c2 * std::exp(-p_.ka() * u);
  }
  return c.rem1 * std::exp(-p_.ke() * (t - c.s));
}

double FatSolution::gut_amount(double t) const {
  const FatCycle& c = cycles_[cycle_index(t) - 1];
  if (t < c.s) return c.dose * std::exp(-p_.ka() * (t - c.t_start));
  return 0.0;
}

double FatSolution::slope_before_s(std::size_t n) const {
  const FatCycle& c = cycle(n);
  const double u = c.s - c.t_start;
  return -p_.ke() * c.c1 * std::exp(-p_.ke() * u) + p_.ka() * c.c2 * std::exp(-p_.ka() * u);
}

double FatSolution::slope_after_s(std::size_t n) const { return -p_.ke() * cycle(n).rem1; }

}  // namespace gbf
