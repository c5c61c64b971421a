#include "gbf/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <sstream>

#include "gbf/bateman.hpp"
#include "gbf/io/csv.hpp"
#include "gbf/oracle.hpp"
#include "gbf/pkmetrics.hpp"
#include "gbf/steady_state.hpp"

namespace gbf::io {

using nlohmann::json;

namespace {

struct ModelEval {
  std::function<double(double)> x;
  std::function<double(double)> y;
  std::function<std::size_t(double)> cycle;
};

ModelEval make_model(const RegimenFile& f, const ScheduleSpec& s) {
  switch (f.model) {
    case ModelKind::Oral: {
      auto sol = std::make_shared<PiecewiseSolution>(
          arbitrary_multidose(validate_params(f.params), oral_regimen(s)));
      return {[sol](double t) { return sol->concentration(t); },
              [sol](double t) { return sol->gut_amount(t); },
              [sol](double t) { return sol->cycle_index(t); }};
    }
    case ModelKind::Bolus: {
      auto sol = std::make_shared<BolusSolution>(bolus_multidose(f.params.ke, bolus_regimen(s, f.horizon)));
      return {[sol](double t) { return sol->concentration(t); }, [](double) { return 0.0; },
              [sol](double t) { return sol->cycle_index(t); }};
    }
    case ModelKind::Fat: {
      auto sol = std::make_shared<FatSolution>(
          fat_multidose(validate_params(f.params), fat_regimen(s, f.horizon)));
      return {[sol](double t) { return sol->concentration(t); },
              [sol](double t) { return sol->gut_amount(t); },
              [sol](double t) { return sol->cycle_index(t); }};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model");
}

std::vector<double> sample_times(const RegimenFile& f) {
  std::vector<double> t;
  if (!(f.horizon > 0.0)) return t;
  const auto count = static_cast<std::size_t>(std::floor(f.horizon / f.sample_step + 1e-9)) + 1;
  t.reserve(count);
  for (std::size_t k = 0; k < count; ++k) t.push_back(static_cast<double>(k) * f.sample_step);
  return t;
}

json round_all(const json& j) {
  if (j.is_number_float()) return report_round(j.get<double>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round_all(*it);
    return out;
  }
  return j;
}

json oral_cycle_row(const PiecewiseSolution& sol, std::size_t n) {
  const CycleMetrics m = cycle_metrics(sol, n);
  const CycleCoefficients c = sol.cycle(n);
  return {{"n", n},
          {"t_start", c.t_start},
          {"t_end", c.t_end()},
          {"trough", sol.remainder(n).x},
          {"auc", m.auc},
          {"t_max", m.peak.t_max},
          {"x_max", m.peak.x_max},
          {"peak_location", to_string(m.peak.location)}};
}

std::size_t analyzed_cycles(double horizon, double tau) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(horizon / tau + 1e-9)));
}

}  // namespace

double report_round(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string dump(const json& j) { return round_all(j).dump(2) + "\n"; }

std::string simulate_csv(const RegimenFile& f, const ScheduleSpec& schedule) {
  std::string out = "t_hours,x_conc,y_mg,cycle\n";
  const std::vector<double> times = sample_times(f);
  if (times.empty()) return out;
  const ModelEval m = make_model(f, schedule);
  for (double t : times) {
    out += format_g6(t);
    out += ',';
    out += format_g6(m.x(t));
    out += ',';
    out += format_g6(m.y(t));
    out += ',';
    out += std::to_string(m.cycle(t));
    out += '\n';
  }
  return out;
}

VerifyResult verify_simulation(const RegimenFile& f, const ScheduleSpec& schedule) {
  const std::vector<double> times = sample_times(f);
  VerifyResult r;
  if (times.empty()) return r;
  const ModelEval m = make_model(f, schedule);
  std::function<double(double)> oracle;
  switch (f.model) {
    case ModelKind::Oral: {
      auto sup = std::make_shared<Superposition>(
          superpose(validate_params(f.params), oral_regimen(schedule), f.horizon));
      oracle = [sup](double t) { return sup->concentration(t); };
      break;
    }
    case ModelKind::Bolus: {
      auto reg = std::make_shared<BolusRegimen>(bolus_regimen(schedule, f.horizon));
      const double ke = f.params.ke;
      oracle = [reg, ke](double t) { return superpose_bolus(ke, *reg, t); };
      break;
    }
    case ModelKind::Fat: {
      auto reg = std::make_shared<FatRegimen>(fat_regimen(schedule, f.horizon));
      const ValidatedParams p = validate_params(f.params);
      oracle = [reg, p](double t) { return superpose_fat(p, *reg, t); };
      break;
    }
  }
  for (double t : times) r.max_deviation = std::max(r.max_deviation, std::abs(m.x(t) - oracle(t)));
  r.samples = times.size();
  return r;
}

json analyze_report(const RegimenFile& f, double eps) {
  json j;
  j["model"] = to_string(f.model);
  j["time_unit"] = "h";
  j["conc_unit"] = "ug/mL";
  const ScheduleSpec& s = f.schedule;
  json cycles = json::array();

  switch (f.model) {
    case ModelKind::Oral: {
      const ValidatedParams p = validate_params(f.params);
      const PiecewiseSolution sol = arbitrary_multidose(p, oral_regimen(s));
      std::size_t count = 0;
      if (s.equi) {
        const double d = s.entries.front().dose;
        const double tau = s.entries.front().interval;
        const SteadyStateSummary ss = summarize_steady_state(p, d, tau, eps);
        j["steady_state"] = {{"ss_lower", ss.ss_lower},     {"ss_upper", ss.ss_upper},
                             {"width", ss.width},           {"width_limit", ss.width_limit},
                             {"auc_single", ss.auc_single}, {"auc_ss", ss.auc_ss},
                             {"auc_rel_diff", auc_equality_check(p, d, tau).rel_diff},
                             {"eps", ss.eps},               {"n_epsilon", ss.n_epsilon}};
        count = analyzed_cycles(f.horizon, tau);
      } else {
        j["steady_state"] = nullptr;
        count = s.entries.size();
      }
      for (std::size_t n = 1; n <= count; ++n) cycles.push_back(oral_cycle_row(sol, n));
      break;
    }
    case ModelKind::Bolus: {
      const BolusSolution sol = bolus_multidose(f.params.ke, bolus_regimen(s, f.horizon));
      if (s.equi) {
        const double delta = s.entries.front().dose;
        const double tau = s.entries.front().interval;
        j["steady_remainder"] = bolus_steady_remainder(f.params.ke, delta, tau);
        j["steady_peak"] = bolus_steady_remainder(f.params.ke, delta, tau) + delta;
      } else {
        j["steady_remainder"] = nullptr;
      }
      for (std::size_t n = 1; n <= sol.cycle_count(); ++n) {
        cycles.push_back({{"n", n},
                          {"t_start", sol.dose_time(n - 1)},
                          {"t_end", sol.dose_time(n)},
                          {"amplitude", sol.amplitude(n)},
                          {"remainder", sol.remainder(n)}});
      }
      break;
    }
    case ModelKind::Fat: {
      const FatSolution sol = fat_multidose(validate_params(f.params), fat_regimen(s, f.horizon));
      for (std::size_t n = 1; n <= sol.cycle_count(); ++n) {
        const FatCycle& c = sol.cycle(n);
        cycles.push_back({{"n", n},
                          {"t_start", c.t_start},
                          {"s", c.s},
                          {"t_end", c.t_end},
                          {"rem1", c.rem1},
                          {"rem2", c.rem2},
                          {"slope_before_s", sol.slope_before_s(n)},
                          {"slope_after_s", sol.slope_after_s(n)}});
      }
      break;
    }
  }
  j["cycles"] = cycles;
  return j;
}

json design_report(const DesignRequest& req) {
  const ValidatedParams p = validate_params(req.params);
  const double to_model = unit_factor(req.unit, ConcentrationUnit::MicrogramPerMl);
  const double from_model = 1.0 / to_model;
  validate_target(req.target);
  const TherapeuticTarget t{req.target.mic * to_model, req.target.tc * to_model,
                            req.target.lower * to_model, req.target.upper * to_model};
  const Design d = design(p, t);
  const double hours = hours_per(req.time_unit);

  constexpr std::size_t kCheckCycles = 200;
  const PiecewiseSolution sol = equi_multidose(p, d.d_star, d.tau_star);
  const double trough = sol.remainder(kCheckCycles).x;
  const double peak = cycle_peak(p, sol.cycle(kCheckCycles)).x_max;
  const double err_lo = std::abs(trough - t.lower) / t.lower;
  const double err_hi = std::abs(peak - t.upper) / t.upper;

  json j;
  j["params"] = {{"ka", p.ka() * hours},
                 {"ke", p.ke() * hours},
                 {"gamma", p.gamma()},
                 {"volume", p.volume()},
                 {"rate_unit", std::string("1/") + to_string(req.time_unit)}};
  j["target"] = {{"mic", req.target.mic},
                 {"tc", req.target.tc},
                 {"lower", req.target.lower},
                 {"upper", req.target.upper},
                 {"conc_unit", to_string(req.unit)}};
  j["d_star"] = d.d_star;
  j["tau_star_hours"] = d.tau_star;
  j["tau_star"] = d.tau_star / hours;
  j["achieved_lower"] = d.achieved_lower * from_model;
  j["achieved_upper"] = d.achieved_upper * from_model;
  j["iterations"] = d.iterations;
  j["feasible"] = feasible_set_check(p, d.d_star, d.tau_star, t);
  j["simulation_check"] = {{"cycles", kCheckCycles},
                           {"trough", trough * from_model},
                           {"peak", peak * from_model},
                           {"rel_error_lower", err_lo},
                           {"rel_error_upper", err_hi},
                           {"within_1pct", err_lo <= 0.01 && err_hi <= 0.01}};
  if (req.round_dose || req.round_tau) {
    const RoundedDesign r = round_design(p, d, t, req.round_dose, req.round_tau);
    j["rounded"] = {{"dose", r.dose},
                    {"tau_hours", r.tau},
                    {"ss_lower", r.ss_lower * from_model},
                    {"ss_upper", r.ss_upper * from_model},
                    {"feasible", r.feasible}};
  }
  return j;
}

json fit_report(const ConcentrationSeries& series, double dose, double volume, TimeUnit time_unit,
                const MonteCarloOptions& mc) {
  const FitResult r = fit_single_dose(series, dose, volume);
  const double hours = hours_per(time_unit);
  json j;
  j["params"] = {{"ka", r.params.ka * hours},
                 {"ke", r.params.ke * hours},
                 {"gamma", r.params.gamma},
                 {"rate_unit", std::string("1/") + to_string(time_unit)}};
  j["dose"] = dose;
  j["volume"] = volume;
  if (r.standard_errors) {
    const auto& se = *r.standard_errors;
    j["stderr"] = {{"ka", se[0] * hours}, {"ke", se[1] * hours}, {"gamma", se[2]}};
  } else {
    j["stderr"] = "singular";
  }
  j["covariance_status"] = to_string(r.covariance_status);
  j["sse"] = r.sse;
  j["r2"] = r.r2;
  j["iterations"] = r.iterations;
  j["points"] = series.size();

  if (mc.reps > 0) {
    const CoverageSummary cs =
        monte_carlo_coverage(r.params, dose, series.times(), mc.noise_fraction, mc.reps, mc.seed);
    j["monte_carlo"] = {{"reps", cs.reps},
                        {"seed", mc.seed},
                        {"noise_fraction", mc.noise_fraction},
                        {"noise_sd", cs.noise_sd},
                        {"failures", cs.failures},
                        {"coverage", {{"ka", cs.coverage[0]},
                                      {"ke", cs.coverage[1]},
                                      {"gamma", cs.coverage[2]},
                                      {"joint", cs.joint_coverage}}}};
  }
  return j;
}

json compare_report(const RegimenFile& f) {
  if (f.model != ModelKind::Oral) throw Error(ErrorCode::InvalidArgument, "compare needs an oral regimen file");
  const std::vector<double> times = sample_times(f);
  if (times.empty()) throw Error(ErrorCode::InvalidArgument, "compare needs a positive horizon");

  std::optional<TherapeuticTarget> target;
  if (f.target) {
    const double k = unit_factor(f.target->unit, ConcentrationUnit::MicrogramPerMl);
    const auto& t = f.target->target;
    target = TherapeuticTarget{t.mic * k, t.tc * k, t.lower * k, t.upper * k};
  }

  json list = json::array();
  auto add = [&](const char* name, const ScheduleSpec& s) {
    const ValidatedParams p = validate_params(f.params);
    const PiecewiseSolution sol = arbitrary_multidose(p, oral_regimen(s));
    std::size_t last_cycle = sol.cycle_index(f.horizon);
    if (last_cycle > 1 && sol.cycle(last_cycle).t_start >= f.horizon) --last_cycle;
    const double start = sol.cycle(last_cycle).t_start;
    double lo = INFINITY, hi = -INFINITY;
    std::size_t below = 0, above = 0;
    for (double t : times) {
      const double x = sol.concentration(t);
      if (t >= start) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (target && x < target->mic) ++below;
      if (target && x > target->tc) ++above;
    }
    json e = {{"name", name}, {"final_cycle", last_cycle}, {"final_cycle_start", start},
              {"final_min", lo},  {"final_max", hi}};
    if (target) {
      const double n = static_cast<double>(times.size());
      e["below_mic_fraction"] = static_cast<double>(below) / n;
      e["above_tc_fraction"] = static_cast<double>(above) / n;
      e["final_cycle_in_window"] = lo >= target->mic && hi <= target->tc;
    }
    list.push_back(e);
  };
  add("schedule", f.schedule);
  if (f.compare_schedule) add("compare_schedule", *f.compare_schedule);

  json j;
  j["conc_unit"] = "ug/mL";
  j["horizon"] = f.horizon;
  j["schedules"] = list;
  return j;
}

}  // namespace gbf::io
