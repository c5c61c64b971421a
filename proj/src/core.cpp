#include "gbf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gbf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::EqualRateConstants: return "EqualRateConstants";
    case ErrorCode::InvalidRegimen: return "InvalidRegimen";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::TargetRatioOutOfRange: return "TargetRatioOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Schema: return "Schema";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) { return code == ErrorCode::NoConvergence; }

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be a finite positive number (got " << v << ")";
    throw Error(ErrorCode::NonPositiveParameter, os.str());
  }
}

}  // namespace

ValidatedParams validate_params(const PkParams& p) {
  require_positive(p.ka, "ka");
  require_positive(p.ke, "ke");
  require_positive(p.gamma, "gamma");
  require_positive(p.volume, "volume");
  if (std::abs(p.ka - p.ke) / std::max(p.ka, p.ke) < kEqualRateTolerance) {
    std::ostringstream os;
    os << "ka (" << p.ka << ") and ke (" << p.ke << ") coincide within relative tolerance "
       << kEqualRateTolerance;
    throw Error(ErrorCode::EqualRateConstants, os.str());
  }
  return ValidatedParams(p);
}

Regimen Regimen::equi(double dose, double interval) {
  if (!(dose > 0.0) || !std::isfinite(dose))
    throw Error(ErrorCode::InvalidRegimen, "dose must be positive");
  if (!(interval > 0.0) || !std::isfinite(interval))
    throw Error(ErrorCode::InvalidRegimen, "interval must be positive");
  return Regimen(EquiDose{dose, interval});
}

Regimen Regimen::arbitrary(std::vector<DoseEntry> entries) {
  if (entries.empty()) throw Error(ErrorCode::InvalidRegimen, "schedule has no entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!(e.dose > 0.0) || !std::isfinite(e.dose) || !(e.interval > 0.0) ||
        !std::isfinite(e.interval)) {
      std::ostringstream os;
      os << "entry " << i + 1 << " needs positive dose and interval (got dose=" << e.dose
         << ", interval=" << e.interval << ")";
      throw Error(ErrorCode::InvalidRegimen, os.str());
    }
  }
  return Regimen(std::move(entries));
}

std::optional<std::size_t> Regimen::size() const noexcept {
  if (is_equi()) return std::nullopt;
  return entries().size();
}

double Regimen::dose(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cycle index is 1-based");
  if (is_equi()) return as_equi().dose;
  if (n > entries().size()) throw Error(ErrorCode::InvalidArgument, "cycle beyond schedule");
  return entries()[n - 1].dose;
}

double Regimen::interval(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cycle index is 1-based");
  if (is_equi()) return as_equi().interval;
  if (n > entries().size()) throw Error(ErrorCode::InvalidArgument, "cycle beyond schedule");
  return entries()[n - 1].interval;
}

Regimen Regimen::truncated(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cannot truncate to zero entries");
  if (is_equi()) {
    return Regimen::arbitrary(
        std::vector<DoseEntry>(n, DoseEntry{as_equi().dose, as_equi().interval}));
  }
  if (n > entries().size()) throw Error(ErrorCode::InvalidArgument, "cycle beyond schedule");
  return Regimen::arbitrary({entries().begin(), entries().begin() + static_cast<long>(n)});
}

std::vector<double> dose_times(const Regimen& r, std::size_t n_max) {
  if (n_max == 0) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  std::vector<double> t(n_max + 1, 0.0);
  if (r.is_equi()) {
    for (std::size_t n = 1; n <= n_max; ++n) t[n] = static_cast<double>(n) * r.as_equi().interval;
    return t;
  }
  if (n_max > r.entries().size())
    throw Error(ErrorCode::InvalidArgument, "n_max exceeds the number of schedule entries");
  for (std::size_t n = 1; n <= n_max; ++n) t[n] = t[n - 1] + r.entries()[n - 1].interval;
  return t;
}

std::vector<double> dose_times(const Regimen& r) {
  if (r.is_equi())
    throw Error(ErrorCode::InvalidArgument, "equi-dose schedule is unbounded; pass n_max");
  return dose_times(r, r.entries().size());
}

const char* to_string(ConcentrationUnit u) {
  return u == ConcentrationUnit::NanogramPerMl ? "ng/mL" : "ug/mL";
}

ConcentrationUnit parse_concentration_unit(const std::string& s) {
  if (s == "ug/mL" || s == "ug/ml" || s == "μg/mL" || s == "μg/ml")
    return ConcentrationUnit::MicrogramPerMl;
  if (s == "ng/mL" || s == "ng/ml") return ConcentrationUnit::NanogramPerMl;
  throw Error(ErrorCode::InvalidArgument, "unknown concentration unit '" + s + "'");
}

double unit_factor(ConcentrationUnit from, ConcentrationUnit to) {
  if (from == to) return 1.0;
  return from == ConcentrationUnit::NanogramPerMl ? 1e-3 : 1e3;
}

ConcentrationSeries::ConcentrationSeries(std::vector<SamplePoint> points, ConcentrationUnit unit)
    : points_(std::move(points)), unit_(unit) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.t) || p.t < 0.0)
      throw Error(ErrorCode::InvalidArgument, "sample " + std::to_string(i) + ": time must be >= 0");
    if (!std::isfinite(p.c) || p.c < 0.0)
      throw Error(ErrorCode::InvalidArgument,
                  "sample " + std::to_string(i) + ": concentration must be >= 0");
    if (i > 0 && !(p.t > points_[i - 1].t))
      throw Error(ErrorCode::InvalidArgument,
                  "sample " + std::to_string(i) + ": times must be strictly increasing");
  }
}

std::vector<double> ConcentrationSeries::times() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.t);
  return out;
}

std::vector<double> ConcentrationSeries::values() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.c);
  return out;
}

ConcentrationSeries ConcentrationSeries::converted(ConcentrationUnit to) const {
  const double f = unit_factor(unit_, to);
  std::vector<SamplePoint> pts = points_;
  for (auto& p : pts) p.c *= f;
  return ConcentrationSeries(std::move(pts), to);
}

TimeUnit parse_time_unit(const std::string& s) {
  if (s == "h" || s == "hour" || s == "hours") return TimeUnit::Hour;
  if (s == "day" || s == "d" || s == "days") return TimeUnit::Day;
  throw Error(ErrorCode::InvalidArgument, "unknown time unit '" + s + "' (expected h or day)");
}

const char* to_string(TimeUnit u) { return u == TimeUnit::Day ? "day" : "h"; }

}  // namespace gbf
