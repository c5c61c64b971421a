// gbf: simulate, analyze, design, fit and compare multi-dose regimens.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure (including a
// failed --verify self-check).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gbf/io/commands.hpp"
#include "gbf/io/csv.hpp"
#include "gbf/io/regimen_file.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw gbf::Error(gbf::ErrorCode::InvalidArgument, "cannot write " + out_path);
  f << text;
}

std::string compare_path(const std::string& out) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + ".compare.csv")).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form multi-dose pharmacokinetics"};
  app.require_subcommand(1);

  std::string regimen_path, out_path, data_path;
  std::string time_unit, conc_unit = "ug/mL";
  bool verify = false;
  double eps = 1e-6;

  auto* sim = app.add_subcommand("simulate", "Sample a regimen file to CSV");
  sim->add_option("--regimen", regimen_path, "Regimen file (JSON)")->required();
  sim->add_option("--out", out_path, "Output CSV (default stdout)");
  sim->add_flag("--verify", verify, "Check against the superposition oracle");

  auto* ana = app.add_subcommand("analyze", "Steady-state summary and per-cycle metrics");
  ana->add_option("--regimen", regimen_path, "Regimen file (JSON)")->required();
  ana->add_option("--eps", eps, "Steady-state tolerance for n_epsilon")->check(CLI::PositiveNumber);
  ana->add_option("--out", out_path, "Output JSON (default stdout)");

  gbf::io::DesignRequest dreq;
  std::optional<double> ka, ke, gamma, mic, tc, lower, upper, round_dose, round_tau;
  double volume = 5000.0;
  auto* des = app.add_subcommand("design", "Dose and interval for target steady-state bounds");
  auto* des_reg = des->add_option("--regimen", regimen_path, "Take params and target from a file");
  auto* des_ka = des->add_option("--ka", ka, "Absorption rate");
  des->add_option("--ke", ke, "Elimination rate");
  des->add_option("--gamma", gamma, "Bioavailability factor");
  des->add_option("--volume", volume, "Volume of distribution, mL");
  des->add_option("--time-unit", time_unit, "Unit of the rates and of --round-tau: h or day");
  des->add_option("--mic", mic, "Minimum inhibitory concentration");
  des->add_option("--tc", tc, "Toxic concentration");
  des->add_option("--lower", lower, "Target steady-state trough");
  des->add_option("--upper", upper, "Target steady-state peak");
  des->add_option("--conc-unit", conc_unit, "ug/mL or ng/mL");
  des->add_option("--round-dose", round_dose, "Round the dose to this step, mg");
  des->add_option("--round-tau", round_tau, "Round the interval to this step");
  des->add_option("--out", out_path, "Output JSON (default stdout)");
  des_reg->excludes(des_ka);

  double dose = 0.0;
  gbf::io::MonteCarloOptions mc;
  auto* fit = app.add_subcommand("fit", "Fit (ka, ke, gamma) to single-dose data");
  fit->add_option("--data", data_path, "CSV with header t,c")->required();
  fit->add_option("--dose", dose, "Dose, mg")->required()->check(CLI::PositiveNumber);
  fit->add_option("--volume", volume, "Volume of distribution, mL")->required()->check(CLI::PositiveNumber);
  fit->add_option("--time-unit", time_unit, "Unit of t: h or day")->required();
  fit->add_option("--conc-unit", conc_unit, "Unit of c: ug/mL or ng/mL");
  fit->add_option("--mc-reps", mc.reps, "Monte-Carlo repetitions (0 = off)");
  fit->add_option("--noise", mc.noise_fraction, "Monte-Carlo noise sd as a fraction of the peak");
  fit->add_option("--seed", mc.seed, "Monte-Carlo seed");
  fit->add_option("--out", out_path, "Output JSON (default stdout)");

  auto* cmp = app.add_subcommand("compare", "Compare a schedule with its compare_schedule");
  cmp->add_option("--regimen", regimen_path, "Regimen file (JSON)")->required();
  cmp->add_option("--out", out_path, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (sim->parsed()) {
      const auto f = gbf::io::load_regimen_file(regimen_path);
      emit(gbf::io::simulate_csv(f, f.schedule), out_path);
      if (f.compare_schedule && !out_path.empty())
        emit(gbf::io::simulate_csv(f, *f.compare_schedule), compare_path(out_path));
      if (verify) {
        auto r = gbf::io::verify_simulation(f, f.schedule);
        if (f.compare_schedule) {
          const auto c = gbf::io::verify_simulation(f, *f.compare_schedule);
          r.max_deviation = std::max(r.max_deviation, c.max_deviation);
          r.samples += c.samples;
        }
        std::fprintf(stderr, "verify: max deviation %.3e over %zu samples\n", r.max_deviation, r.samples);
        if (!(r.max_deviation <= gbf::io::kVerifyTolerance)) {
          std::fprintf(stderr, "verify: FAILED (tolerance %.0e)\n", gbf::io::kVerifyTolerance);
          return kExitNumerical;
        }
      }
    } else if (ana->parsed()) {
      const auto f = gbf::io::load_regimen_file(regimen_path);
      emit(gbf::io::dump(gbf::io::analyze_report(f, eps)), out_path);
    } else if (des->parsed()) {
      if (!regimen_path.empty()) {
        const auto f = gbf::io::load_regimen_file(regimen_path);
        if (f.model != gbf::io::ModelKind::Oral)
          throw gbf::Error(gbf::ErrorCode::InvalidArgument, "design needs an oral regimen file");
        dreq.params = f.params;
        dreq.time_unit = f.time_unit;
        if (f.target) {
          dreq.target = f.target->target;
          dreq.unit = f.target->unit;
        }
        if (!f.target && !(mic && tc && lower && upper))
          throw gbf::Error(gbf::ErrorCode::InvalidTarget, "regimen file has no target block");
      } else {
        if (!(ka && ke && gamma))
          throw gbf::Error(gbf::ErrorCode::InvalidArgument, "need --regimen or --ka, --ke and --gamma");
        if (time_unit.empty()) throw gbf::Error(gbf::ErrorCode::InvalidArgument, "--time-unit is required");
        dreq.time_unit = gbf::parse_time_unit(time_unit);
        const double h = gbf::hours_per(dreq.time_unit);
        dreq.params = {*ka / h, *ke / h, *gamma, volume};
        if (!(mic && tc && lower && upper))
          throw gbf::Error(gbf::ErrorCode::InvalidTarget, "need --mic, --tc, --lower and --upper");
      }
      if (mic && tc && lower && upper) {
        dreq.target = {*mic, *tc, *lower, *upper};
        dreq.unit = gbf::parse_concentration_unit(conc_unit);
      }
      dreq.round_dose = round_dose;
      if (round_tau) dreq.round_tau = *round_tau * gbf::hours_per(dreq.time_unit);
      emit(gbf::io::dump(gbf::io::design_report(dreq)), out_path);
    } else if (fit->parsed()) {
      const auto tu = gbf::parse_time_unit(time_unit);
      const auto cu = gbf::parse_concentration_unit(conc_unit);
      const auto raw = gbf::io::read_concentration_csv_file(data_path, cu);
      // Fit in hours and ug/mL; rates are reported back in the declared unit.
      const auto model_units = raw.converted(gbf::ConcentrationUnit::MicrogramPerMl);
      std::vector<gbf::SamplePoint> pts;
      for (const auto& p : model_units.points())
        pts.push_back({p.t * gbf::hours_per(tu), p.c});
      emit(gbf::io::dump(gbf::io::fit_report(gbf::ConcentrationSeries(std::move(pts)), dose, volume, tu, mc)),
           out_path);
    } else if (cmp->parsed()) {
      const auto f = gbf::io::load_regimen_file(regimen_path);
      emit(gbf::io::dump(gbf::io::compare_report(f)), out_path);
    }
  } catch (const gbf::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return gbf::is_numerical(e.code()) ? kExitNumerical : kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return 0;
}
