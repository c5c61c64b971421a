#include "gbf/io/regimen_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gbf::io {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Schema, path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) schema_error(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  const std::string here = path.empty() ? key : path + "." + key;
  if (!parent.contains(key)) schema_error(here, "missing");
  const json& v = parent.at(key);
  if (!v.is_object()) schema_error(here, "expected an object");
  return v;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& parent, const std::string& key, const std::string& path) {
  const std::string here = join(path, key);
  if (!parent.contains(key)) schema_error(here, "missing");
  const json& v = parent.at(key);
  if (!v.is_number()) schema_error(here, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(here, "expected a finite number");
  return d;
}

double positive(const json& parent, const std::string& key, const std::string& path) {
  const double d = number(parent, key, path);
  if (!(d > 0.0)) schema_error(join(path, key), "must be positive");
  return d;
}

std::string text(const json& parent, const std::string& key, const std::string& path) {
  const std::string here = path.empty() ? key : path + "." + key;
  if (!parent.contains(key)) schema_error(here, "missing");
  if (!parent.at(key).is_string()) schema_error(here, "expected a string");
  return parent.at(key).get<std::string>();
}

ScheduleEntry entry(const json& e, const std::string& path, ModelKind model, double hours) {
  if (!e.is_object()) schema_error(path, "expected an object");
  reject_unknown(e, path, {"dose", "interval", "fat_offset"});
  ScheduleEntry s;
  s.dose = positive(e, "dose", path);
  s.interval = positive(e, "interval", path) * hours;
  if (e.contains("fat_offset")) {
    if (model != ModelKind::Fat) schema_error(path + ".fat_offset", "only valid for the fat model");
    s.fat_offset = positive(e, "fat_offset", path) * hours;
    if (*s.fat_offset > s.interval * (1.0 + 1e-12))
      schema_error(path + ".fat_offset", "must not exceed the interval");
    s.fat_offset = std::min(*s.fat_offset, s.interval);
  } else if (model == ModelKind::Fat) {
    schema_error(path + ".fat_offset", "missing");
  }
  return s;
}

ScheduleSpec schedule(const json& doc, const std::string& key, ModelKind model, double hours) {
  const json& s = require_object(doc, key, "");
  reject_unknown(s, key, {"equi", "arbitrary"});
  ScheduleSpec out;
  if (s.contains("equi") == s.contains("arbitrary"))
    schema_error(key, "exactly one of \"equi\" or \"arbitrary\" is required");
  if (s.contains("equi")) {
    out.equi = true;
    out.entries.push_back(entry(s.at("equi"), key + ".equi", model, hours));
  } else {
    const json& list = s.at("arbitrary");
    if (!list.is_array()) schema_error(key + ".arbitrary", "expected an array");
    if (list.empty()) schema_error(key + ".arbitrary", "must not be empty");
    for (std::size_t i = 0; i < list.size(); ++i)
      out.entries.push_back(entry(list[i], key + ".arbitrary[" + std::to_string(i) + "]", model, hours));
  }
  return out;
}

std::size_t equi_count(double interval, double horizon) {
  return static_cast<std::size_t>(std::floor(horizon / interval)) + 1;
}

}  // namespace

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Oral: return "oral";
    case ModelKind::Bolus: return "bolus";
    case ModelKind::Fat: return "fat";
  }
  return "unknown";
}

RegimenFile parse_regimen_file(const std::string& src) {
  json doc;
  try {
    doc = json::parse(src);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, src.size());
    const auto line = 1 + std::count(src.begin(), src.begin() + static_cast<long>(upto), '\n');
    const auto nl = src.rfind('\n', upto == 0 ? 0 : upto - 1);
    const std::size_t col = nl == std::string::npos ? upto + 1 : upto - nl;
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": malformed JSON";
    throw Error(ErrorCode::Parse, os.str());
  }
  if (!doc.is_object()) schema_error("(document)", "expected an object");
  reject_unknown(doc, "", {"schema", "model", "params", "schedule", "compare_schedule", "horizon",
                           "sample_step", "target"});

  if (!doc.contains("schema")) schema_error("schema", "missing");
  if (!doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != 1)
    schema_error("schema", "unsupported version (expected 1)");

  RegimenFile f;
  const std::string model = text(doc, "model", "");
  if (model == "oral") f.model = ModelKind::Oral;
  else if (model == "bolus") f.model = ModelKind::Bolus;
  else if (model == "fat") f.model = ModelKind::Fat;
  else schema_error("model", "expected \"oral\", \"bolus\" or \"fat\"");

  const json& params = require_object(doc, "params", "");
  reject_unknown(params, "params", {"ka", "ke", "gamma", "volume", "time_unit"});
  try {
    f.time_unit = parse_time_unit(text(params, "time_unit", "params"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    schema_error("params.time_unit", "expected \"h\" or \"day\"");
  }
  const double hours = hours_per(f.time_unit);
  f.params.ke = positive(params, "ke", "params") / hours;
  if (f.model == ModelKind::Bolus) {
    f.params.ka = 0.0;
    f.params.gamma = 0.0;
    f.params.volume = 0.0;
  } else {
    f.params.ka = positive(params, "ka", "params") / hours;
    f.params.gamma = positive(params, "gamma", "params");
    f.params.volume = positive(params, "volume", "params");
    try {
      validate_params(f.params);
    } catch (const Error& e) {
      schema_error("params", e.what());
    }
  }

  f.schedule = schedule(doc, "schedule", f.model, hours);
  if (doc.contains("compare_schedule")) {
    if (f.model != ModelKind::Oral) schema_error("compare_schedule", "only valid for the oral model");
    f.compare_schedule = schedule(doc, "compare_schedule", f.model, hours);
  }

  f.horizon = number(doc, "horizon", "") * hours;
  if (f.horizon < 0.0) schema_error("horizon", "must be >= 0");
  f.sample_step = positive(doc, "sample_step", "") * hours;

  if (doc.contains("target")) {
    const json& t = require_object(doc, "target", "");
    reject_unknown(t, "target", {"mic", "tc", "lower", "upper", "conc_unit"});
    TargetSpec ts;
    ts.target = {positive(t, "mic", "target"), positive(t, "tc", "target"), positive(t, "lower", "target"),
                 positive(t, "upper", "target")};
    try {
      ts.unit = parse_concentration_unit(text(t, "conc_unit", "target"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema) throw;
      schema_error("target.conc_unit", "expected \"ug/mL\" or \"ng/mL\"");
    }
    try {
      validate_target(ts.target);
    } catch (const Error& e) {
      schema_error("target", e.what());
    }
    f.target = ts;
  }
  return f;
}

RegimenFile load_regimen_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_regimen_file(ss.str());
}

Regimen oral_regimen(const ScheduleSpec& s) {
  if (s.equi) return Regimen::equi(s.entries.front().dose, s.entries.front().interval);
  std::vector<DoseEntry> e;
  e.reserve(s.entries.size());
  for (const auto& x : s.entries) e.push_back({x.dose, x.interval});
  return Regimen::arbitrary(std::move(e));
}

BolusRegimen bolus_regimen(const ScheduleSpec& s, double horizon) {
  if (s.equi) {
    const auto& e = s.entries.front();
    return BolusRegimen::equi(e.dose, e.interval, equi_count(e.interval, horizon));
  }
  std::vector<BolusEntry> e;
  for (const auto& x : s.entries) e.push_back({x.dose, x.interval});
  return BolusRegimen(std::move(e));
}

FatRegimen fat_regimen(const ScheduleSpec& s, double horizon) {
  if (s.equi) {
    const auto& e = s.entries.front();
    return FatRegimen::equi(e.dose, e.interval, *e.fat_offset, equi_count(e.interval, horizon));
  }
  std::vector<FatEntry> e;
  for (const auto& x : s.entries) e.push_back({x.dose, x.interval, *x.fat_offset});
  return FatRegimen(std::move(e));
}

}  // namespace gbf::io
