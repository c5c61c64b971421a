#pragma once

// Command implementations behind the `gbf` executable. Each returns the exact
// bytes the CLI writes, so outputs can be compared against golden files.

#include <cstdint>
#include <optional>
#include <string>

#include "gbf/core.hpp"
#include "gbf/dosing.hpp"
#include "gbf/fit.hpp"
#include "gbf/io/regimen_file.hpp"
#include "json.hpp"

namespace gbf::io {

/// `t_hours,x_conc,y_mg,cycle` rows at k * sample_step for k = 0..floor(horizon/step).
/// A zero horizon gives the header alone.
std::string simulate_csv(const RegimenFile& f, const ScheduleSpec& schedule);

struct VerifyResult {
  double max_deviation = 0.0;
  std::size_t samples = 0;
};

/// Closed form vs the superposition oracle on the simulate grid.
VerifyResult verify_simulation(const RegimenFile& f, const ScheduleSpec& schedule);

inline constexpr double kVerifyTolerance = 1e-8;

nlohmann::json analyze_report(const RegimenFile& f, double eps);

struct DesignRequest {
  PkParams params;  // rates per hour
  TherapeuticTarget target;
  ConcentrationUnit unit = ConcentrationUnit::MicrogramPerMl;
  TimeUnit time_unit = TimeUnit::Hour;
  std::optional<double> round_dose;
  std::optional<double> round_tau;  // hours
};

/// Design plus a feasibility check and a 200-cycle simulation check.
nlohmann::json design_report(const DesignRequest& req);

struct MonteCarloOptions {
  std::size_t reps = 0;
  double noise_fraction = 0.02;  // sd as a fraction of the peak
  std::uint64_t seed = 1;
};

/// The series is in hours and model units (ug/mL).
nlohmann::json fit_report(const ConcentrationSeries& series, double dose, double volume,
                          TimeUnit time_unit, const MonteCarloOptions& mc);

/// Range of each schedule over the final dosing cycle within the horizon, and
/// the fraction of sampled times outside [mic, tc].
nlohmann::json compare_report(const RegimenFile& f);

/// Values rounded to 12 significant digits, two-space indent, trailing LF.
std::string dump(const nlohmann::json& j);

/// 12-significant-digit rounding used for every reported number.
double report_round(double v);

}  // namespace gbf::io
