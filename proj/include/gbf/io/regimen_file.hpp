#pragma once

// JSON regimen documents (`"schema": 1`). Every time and rate in the file is
// in the declared params.time_unit; load_regimen_file converts to hours.
//
// {
//   "schema": 1,
//   "model": "oral" | "bolus" | "fat",
//   "params": {"ka": .., "ke": .., "gamma": .., "volume": .., "time_unit": "h" | "day"},
//   "schedule": {"equi": {"dose": .., "interval": .., "fat_offset": ..}}
//             | {"arbitrary": [{"dose": .., "interval": .., "fat_offset": ..}, ...]},
//   "compare_schedule": <schedule>,            (optional, oral only)
//   "horizon": .., "sample_step": ..,
//   "target": {"mic": .., "tc": .., "lower": .., "upper": .., "conc_unit": "ug/mL" | "ng/mL"}
// }
//
// Bolus files only need params.ke and use "dose" for the concentration step.

#include <optional>
#include <string>
#include <vector>

#include "gbf/core.hpp"
#include "gbf/dosing.hpp"
#include "gbf/extmodels.hpp"

namespace gbf::io {

enum class ModelKind { Oral, Bolus, Fat };

const char* to_string(ModelKind m);

struct ScheduleEntry {
  double dose = 0.0;
  double interval = 0.0;
  std::optional<double> fat_offset;
};

struct ScheduleSpec {
  bool equi = false;
  std::vector<ScheduleEntry> entries;  // a single entry when equi
};

struct TargetSpec {
  TherapeuticTarget target;  // in `unit`
  ConcentrationUnit unit = ConcentrationUnit::MicrogramPerMl;
};

struct RegimenFile {
  ModelKind model = ModelKind::Oral;
  PkParams params;  // rates per hour
  TimeUnit time_unit = TimeUnit::Hour;
  ScheduleSpec schedule;
  std::optional<ScheduleSpec> compare_schedule;
  double horizon = 0.0;      // hours
  double sample_step = 0.0;  // hours
  std::optional<TargetSpec> target;
};

/// Throws Error{Parse} (with line and column) or Error{Schema} (with the field path).
RegimenFile parse_regimen_file(const std::string& text);
RegimenFile load_regimen_file(const std::string& path);

/// Oral schedule as a Regimen. Equi schedules stay unbounded.
Regimen oral_regimen(const ScheduleSpec& s);

/// Equi bolus/FAT schedules are expanded to cover the horizon.
BolusRegimen bolus_regimen(const ScheduleSpec& s, double horizon);
FatRegimen fat_regimen(const ScheduleSpec& s, double horizon);

}  // namespace gbf::io
