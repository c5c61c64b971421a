#include "gbf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbf {

namespace {

struct Rhs {
  double ka, ke, c;
  bool absorbing;
  void operator()(double x, double y, double& dx, double& dy) const {
    dy = absorbing ? -ka * y : 0.0;
    dx = c * y - ke * x;
  }
};

void rk4(const Rhs& f, double h, double& x, double& y) {
  double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
  f(x, y, k1x, k1y);
  f(x + 0.5 * h * k1x, y + 0.5 * h * k1y, k2x, k2y);
  f(x + 0.5 * h * k2x, y + 0.5 * h * k2y, k3x, k3y);
  f(x + h * k3x, y + h * k3y, k4x, k4y);
  x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
}

}  // namespace

OdeTrajectory integrate_impulsive(double ka, double ke, double coupling,
                                  std::vector<Impulse> impulses, double t_end, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (!(t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  std::stable_sort(impulses.begin(), impulses.end(),
                   [](const Impulse& a, const Impulse& b) { return a.time < b.time; });
  impulses.erase(std::remove_if(impulses.begin(), impulses.end(),
                                [&](const Impulse& i) { return i.time > t_end; }),
                 impulses.end());

  std::vector<double> breaks;
  for (const auto& i : impulses)
    if (breaks.empty() || i.time > breaks.back()) breaks.push_back(i.time);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < breaks.size(); ++i) min_gap = std::min(min_gap, breaks[i] - breaks[i - 1]);
  if (step > min_gap / 10.0)
    throw Error(ErrorCode::StepTooLarge, "step exceeds a tenth of the shortest dosing interval");

  const Rhs f{ka, ke, coupling, true};
  OdeTrajectory out;
  double x = 0.0, y = 0.0, t = 0.0;
  std::size_t next = 0;

  auto apply_at = [&](double when) {
    while (next < impulses.size() && impulses[next].time == when) {
      const Impulse& im = impulses[next++];
      if (im.reset_y) y = 0.0;
      y += im.dy;
      x += im.dx;
    }
  };

  apply_at(0.0);
  out.t.push_back(t);
  out.x.push_back(x);
  out.y.push_back(y);

  std::vector<double> ends;
  for (double b : breaks)
    if (b > 0.0) ends.push_back(b);
  if (ends.empty() || ends.back() < t_end) ends.push_back(t_end);

  for (double seg_end : ends) {
    const double len = seg_end - t;
    const auto steps = static_cast<std::size_t>(std::ceil(len / step));
    const double h = len / static_cast<double>(steps);
    const double seg_start = t;
    for (std::size_t k = 1; k <= steps; ++k) {
      rk4(f, h, x, y);
      t = k == steps ? seg_end : seg_start + static_cast<double>(k) * h;
      if (k == steps) apply_at(seg_end);
      out.t.push_back(t);
      out.x.push_back(x);
      out.y.push_back(y);
    }
  }
  return out;
}

OdeTrajectory integrate_ode(const ValidatedParams& p, const Regimen& r, double t_end,
                            const OracleConfig& cfg) {
  std::vector<Impulse> imp = cfg.impulses;
  if (r.is_equi()) {
    const auto& eq = r.as_equi();
    for (std::size_t k = 0; static_cast<double>(k) * eq.interval <= t_end; ++k)
      imp.push_back({static_cast<double>(k) * eq.interval, eq.dose, 0.0, false});
  } else {
    double t = 0.0;
    for (const auto& e : r.entries()) {
      imp.push_back({t, e.dose, 0.0, false});
      t += e.interval;
    }
  }
  return integrate_impulsive(p.ka(), p.ke(), p.ka() * p.gamma() / p.volume(), std::move(imp), t_end,
                             cfg.step);
}

OdeTrajectory integrate_fat(const ValidatedParams& p, const FatRegimen& r, double t_end,
                            const OracleConfig& cfg) {
  std::vector<Impulse> imp = cfg.impulses;
  double t = 0.0;
  for (const auto& e : r.entries()) {
    imp.push_back({t, e.dose, 0.0, true});
    // When s_n = t_n the reset coincides with the next dose's reset.
    if (e.s_offset < e.interval) imp.push_back({t + e.s_offset, 0.0, 0.0, true});
    t += e.interval;
  }
  return integrate_impulsive(p.ka(), p.ke(), p.ka() * p.gamma() / p.volume(), std::move(imp), t_end,
                             cfg.step);
}

OdeTrajectory integrate_bolus(double ke, const BolusRegimen& r, double t_end, const OracleConfig& cfg) {
  if (!(ke > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "ke must be positive");
  std::vector<Impulse> imp = cfg.impulses;
  double t = 0.0;
  for (const auto& e : r.entries()) {
    imp.push_back({t, 0.0, e.delta, false});
    t += e.interval;
  }
  return integrate_impulsive(0.0, ke, 0.0, std::move(imp), t_end, cfg.step);
}

Superposition::Superposition(const PkParams& p, std::vector<double> dose_times, std::vector<double> doses)
    : p_(p), times_(std::move(dose_times)), doses_(std::move(doses)) {}

double Superposition::concentration(double t) const {
  const double scale = p_.ka * p_.gamma / (p_.volume * (p_.ka - p_.ke));
  double sum = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] > t) break;
    const double u = t - times_[i];
    sum += scale * doses_[i] * (std::exp(-p_.ke * u) - std::exp(-p_.ka * u));
  }
  return sum;
}

double Superposition::gut_amount(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] > t) break;
    sum += doses_[i] * std::exp(-p_.ka * (t - times_[i]));
  }
  return sum;
}

Superposition superpose(const ValidatedParams& p, const Regimen& r, double t_max) {
  std::vector<double> times, doses;
  if (r.is_equi()) {
    const auto& eq = r.as_equi();
    for (std::size_t k = 0; static_cast<double>(k) * eq.interval <= t_max; ++k) {
      times.push_back(static_cast<double>(k) * eq.interval);
      doses.push_back(eq.dose);
    }
  } else {
    double t = 0.0;
    for (const auto& e : r.entries()) {
      times.push_back(t);
      doses.push_back(e.dose);
      t += e.interval;
    }
  }
  return Superposition(p.raw(), std::move(times), std::move(doses));
}

double superpose_bolus(double ke, const BolusRegimen& r, double t) {
  double sum = 0.0, start = 0.0;
  for (const auto& e : r.entries()) {
    if (start > t) break;
    sum += e.delta * std::exp(-ke * (t - start));
    start += e.interval;
  }
  return sum;
}

double superpose_fat(const ValidatedParams& p, const FatRegimen& r, double t) {
  const double scale = p.ka() * p.gamma() / (p.volume() * (p.ka() - p.ke()));
  auto bateman = [&](double d, double u) {
    return scale * d * (std::exp(-p.ke() * u) - std::exp(-p.ka() * u));
  };
  double sum = 0.0, start = 0.0;
  for (const auto& e : r.entries()) {
    if (start > t) break;
    const double u = t - start;
    if (u < e.s_offset) {
      sum += bateman(e.dose, u);
    } else {
      sum += bateman(e.dose, e.s_offset) * std::exp(-p.ke() * (u - e.s_offset));
    }
    start += e.interval;
  }
  return sum;
}

}  // namespace gbf
