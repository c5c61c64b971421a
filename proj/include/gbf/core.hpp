#pragma once

// Shared domain types for the multi-dose pharmacokinetic library.
//
// Unit conventions: time in hours, doses in mg, volumes in mL. Concentrations
// are carried in "model units" (ug/mL unless a series declares otherwise).
// All times are offsets from the first dose at t = 0.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace gbf {

enum class ErrorCode {
  NonPositiveParameter,
  EqualRateConstants,
  InvalidRegimen,
  InvalidArgument,
  InvalidTarget,
  TargetRatioOutOfRange,
  NoConvergence,
  InsufficientData,
  StepTooLarge,
  Parse,
  Schema,
};

const char* to_string(ErrorCode code);

/// True for codes that represent a numerical failure rather than bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raw patient/drug parameter vector. Rates are per hour.
struct PkParams {
  double ka = 0.0;
  double ke = 0.0;
  double gamma = 0.0;
  double volume = 5000.0;

  friend bool operator==(const PkParams&, const PkParams&) = default;
};

/// Relative tolerance under which ka and ke are treated as equal.
inline constexpr double kEqualRateTolerance = 1e-9;

/// PkParams that passed validate_params(). Only constructible through it.
class ValidatedParams {
 public:
  double ka() const noexcept { return raw_.ka; }
  double ke() const noexcept { return raw_.ke; }
  double gamma() const noexcept { return raw_.gamma; }
  double volume() const noexcept { return raw_.volume; }
  const PkParams& raw() const noexcept { return raw_; }

  /// ka > ke is the usual ordering; ka < ke is the flip-flop situation.
  bool flip_flop() const noexcept { return raw_.ka < raw_.ke; }

  /// Concentration per unit dose scale ka*gamma / (V*(ka - ke)).
  /// Negative in the flip-flop ordering.
  double amplitude_per_dose() const noexcept {
    return raw_.ka * raw_.gamma / (raw_.volume * (raw_.ka - raw_.ke));
  }

  friend bool operator==(const ValidatedParams&, const ValidatedParams&) = default;

 private:
  friend ValidatedParams validate_params(const PkParams& p);
  explicit ValidatedParams(const PkParams& p) : raw_(p) {}
  PkParams raw_;
};

/// Throws Error{NonPositiveParameter} or Error{EqualRateConstants}.
ValidatedParams validate_params(const PkParams& p);

/// Convenience for call sites that hold raw numbers.
inline ValidatedParams validate_params(double ka, double ke, double gamma, double volume = 5000.0) {
  return validate_params(PkParams{ka, ke, gamma, volume});
}

struct DoseEntry {
  double dose = 0.0;      // mg
  double interval = 0.0;  // hours until the next dose

  friend bool operator==(const DoseEntry&, const DoseEntry&) = default;
};

struct EquiDose {
  double dose = 0.0;
  double interval = 0.0;

  friend bool operator==(const EquiDose&, const EquiDose&) = default;
};

/// Dosing schedule. Dose n (1-based) is taken at t_{n-1}; interval n is
/// t_n - t_{n-1}. Equi-dose schedules are unbounded, arbitrary ones finite.
class Regimen {
 public:
  static Regimen equi(double dose, double interval);
  static Regimen arbitrary(std::vector<DoseEntry> entries);

  bool is_equi() const noexcept { return std::holds_alternative<EquiDose>(v_); }
  const EquiDose& as_equi() const { return std::get<EquiDose>(v_); }
  const std::vector<DoseEntry>& entries() const { return std::get<std::vector<DoseEntry>>(v_); }

  /// Number of listed doses; nullopt for an unbounded equi-dose schedule.
  std::optional<std::size_t> size() const noexcept;

  /// Dose and interval of cycle n >= 1.
  double dose(std::size_t n) const;
  double interval(std::size_t n) const;

  /// The first n entries as an explicit list (equi-dose expanded).
  Regimen truncated(std::size_t n) const;

  friend bool operator==(const Regimen&, const Regimen&) = default;

 private:
  explicit Regimen(std::variant<EquiDose, std::vector<DoseEntry>> v) : v_(std::move(v)) {}
  std::variant<EquiDose, std::vector<DoseEntry>> v_;
};

/// [t_0 = 0, t_1, ..., t_{n_max}]. For arbitrary schedules n_max may not exceed
/// the number of entries.
std::vector<double> dose_times(const Regimen& r, std::size_t n_max);

/// All t_n of a finite schedule.
std::vector<double> dose_times(const Regimen& r);

/// Closed cycle interval I_n = [t_{n-1}, t_n].
struct CycleInterval {
  std::size_t n = 1;
  double start = 0.0;
  double end = 0.0;
};

enum class ConcentrationUnit { MicrogramPerMl, NanogramPerMl };

const char* to_string(ConcentrationUnit u);
ConcentrationUnit parse_concentration_unit(const std::string& s);

/// Multiplier taking a value in `from` into `to`.
double unit_factor(ConcentrationUnit from, ConcentrationUnit to);

struct SamplePoint {
  double t = 0.0;
  double c = 0.0;
};

/// Time-concentration samples. Times strictly increasing and >= 0;
/// concentrations >= 0.
class ConcentrationSeries {
 public:
  ConcentrationSeries() = default;
  explicit ConcentrationSeries(std::vector<SamplePoint> points,
                               ConcentrationUnit unit = ConcentrationUnit::MicrogramPerMl);

  const std::vector<SamplePoint>& points() const noexcept { return points_; }
  ConcentrationUnit unit() const noexcept { return unit_; }
  std::size_t size() const noexcept { return points_.size(); }

  std::vector<double> times() const;
  std::vector<double> values() const;

  ConcentrationSeries converted(ConcentrationUnit to) const;

 private:
  std::vector<SamplePoint> points_;
  ConcentrationUnit unit_ = ConcentrationUnit::MicrogramPerMl;
};

enum class TimeUnit { Hour, Day };

TimeUnit parse_time_unit(const std::string& s);
const char* to_string(TimeUnit u);

/// Hours per unit.
inline double hours_per(TimeUnit u) { return u == TimeUnit::Day ? 24.0 : 1.0; }

}  // namespace gbf
