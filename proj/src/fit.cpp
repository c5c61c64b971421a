#include "gbf/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gbf {

namespace {

constexpr std::size_t kMinPoints = 4;

double model(const PkParams& p, double dose, double t) {
  return p.ka * p.gamma * dose / (p.volume * (p.ka - p.ke)) *
         (std::exp(-p.ke * t) - std::exp(-p.ka * t));
}

bool usable(const PkParams& p) {
  return std::isfinite(p.ka) && std::isfinite(p.ke) && std::isfinite(p.gamma) && p.ka > 0 &&
         p.ke > 0 && p.gamma > 0 &&
         std::abs(p.ka - p.ke) > kEqualRateTolerance * std::max(p.ka, p.ke);
}

PkParams from_log(const Eigen::Vector3d& th, double volume) {
  return {std::exp(th(0)), std::exp(th(1)), std::exp(th(2)), volume};
}

struct Evaluation {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jac;  // d(prediction)/d(log theta)
  double sse = 0.0;
};

Evaluation evaluate(const PkParams& p, double dose, const std::vector<double>& t,
                    const Eigen::VectorXd& obs, bool with_jacobian) {
  const auto m = static_cast<Eigen::Index>(t.size());
  Evaluation e;
  e.residual.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) e.residual(i) = obs(i) - model(p, dose, t[i]);
  e.sse = e.residual.squaredNorm();
  if (with_jacobian) {
    const auto rows = bateman_jacobian(p, dose, t);
    e.jac.resize(m, 3);
    const double scale[3] = {p.ka, p.ke, p.gamma};
    for (Eigen::Index i = 0; i < m; ++i)
      for (int j = 0; j < 3; ++j) e.jac(i, j) = rows[static_cast<std::size_t>(i)][j] * scale[j];
  }
  return e;
}

}  // namespace

const char* to_string(CovarianceStatus s) { return s == CovarianceStatus::Ok ? "ok" : "singular"; }

std::vector<std::array<double, 3>> bateman_jacobian(const PkParams& p, double dose,
                                                    const std::vector<double>& times) {
  const double a = p.gamma * dose / p.volume;
  const double dk = p.ka - p.ke;
  std::vector<std::array<double, 3>> out;
  out.reserve(times.size());
  for (double t : times) {
    const double e1 = std::exp(-p.ke * t);
    const double e2 = std::exp(-p.ka * t);
    const double g = e1 - e2;
    const double d_ka = a * (-p.ke * g / (dk * dk) + p.ka * t * e2 / dk);
    const double d_ke = a * p.ka * (g / (dk * dk) - t * e1 / dk);
    const double d_gamma = dose / p.volume * p.ka * g / dk;
    out.push_back({d_ka, d_ke, d_gamma});
  }
  return out;
}

PkParams initial_guess(const ConcentrationSeries& series, double dose, double volume) {
  const auto& pts = series.points();
  if (pts.size() < kMinPoints) throw Error(ErrorCode::InsufficientData, "need at least 4 points");

  // Least-squares slope of ln c over the last three positive samples.
  std::vector<SamplePoint> tail;
  for (auto it = pts.rbegin(); it != pts.rend() && tail.size() < 3; ++it)
    if (it->c > 0.0) tail.push_back(*it);
  double ke = 0.0;
  if (tail.size() >= 2) {
    double mt = 0.0, ml = 0.0;
    for (const auto& s : tail) { mt += s.t; ml += std::log(s.c); }
    mt /= static_cast<double>(tail.size());
    ml /= static_cast<double>(tail.size());
    double num = 0.0, den = 0.0;
    for (const auto& s : tail) {
      num += (s.t - mt) * (std::log(s.c) - ml);
      den += (s.t - mt) * (s.t - mt);
    }
    if (den > 0.0) ke = -num / den;
  }
  if (!(ke > 0.0) || !std::isfinite(ke)) ke = std::log(2.0) / (0.5 * pts.back().t);

  PkParams p{5.0 * ke, ke, 1.0, volume};
  const auto peak = std::max_element(pts.begin(), pts.end(),
                                     [](const SamplePoint& a, const SamplePoint& b) { return a.c < b.c; });
  const double unit = model(p, dose, peak->t);
  p.gamma = (peak->c > 0.0 && unit > 0.0) ? peak->c / unit : 1.0;
  return p;
}

double r_squared(const ConcentrationSeries& series, const std::vector<double>& predicted) {
  const auto obs = series.values();
  const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / static_cast<double>(obs.size());
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    sse += (obs[i] - predicted[i]) * (obs[i] - predicted[i]);
    sst += (obs[i] - mean) * (obs[i] - mean);
  }
  return 1.0 - sse / sst;
}

FitResult fit_single_dose(const ConcentrationSeries& series, double dose, double volume,
                          std::optional<PkParams> init, const FitOptions& options) {
  if (series.size() < kMinPoints)
    throw Error(ErrorCode::InsufficientData, "need at least 4 points to fit 3 parameters");
  if (!(dose > 0.0) || !(volume > 0.0))
    throw Error(ErrorCode::NonPositiveParameter, "dose and volume must be positive");

  const std::vector<double> t = series.times();
  const std::vector<double> obs_v = series.values();
  const Eigen::VectorXd obs = Eigen::Map<const Eigen::VectorXd>(obs_v.data(), static_cast<Eigen::Index>(obs_v.size()));

  PkParams start = init ? *init : initial_guess(series, dose, volume);
  start.volume = volume;
  validate_params(start);

  Eigen::Vector3d theta(std::log(start.ka), std::log(start.ke), std::log(start.gamma));
  Evaluation cur = evaluate(start, dose, t, obs, true);
  double lambda = options.initial_damping;

  FitResult res;
  res.sse_history.push_back(cur.sse);
  bool converged = false;
  std::size_t iter = 0;

  while (iter < options.max_iterations) {
    const Eigen::Matrix3d jtj = cur.jac.transpose() * cur.jac;
    const Eigen::Vector3d grad = cur.jac.transpose() * cur.residual;
    if (grad.norm() < options.gradient_tolerance) { converged = true; break; }
    ++iter;

    bool accepted = false;
    while (!accepted) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(grad);
      const Eigen::Vector3d trial = theta + step;
      const PkParams tp = from_log(trial, volume);
      if (step.allFinite() && usable(tp)) {
        Evaluation next = evaluate(tp, dose, t, obs, false);
        if (std::isfinite(next.sse) && next.sse <= cur.sse) {
          const double rel = (cur.sse - next.sse) / std::max(cur.sse, 1e-300);
          theta = trial;
          cur = evaluate(tp, dose, t, obs, true);
          res.sse_history.push_back(cur.sse);
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          if (rel < options.rel_sse_tolerance) converged = true;
          break;
        }
      }
      lambda *= 10.0;
      // Damping this large means no descent direction is resolvable: stationary.
      if (lambda > 1e20) { converged = true; break; }
    }
    if (converged) break;
  }

  res.params = from_log(theta, volume);
  res.sse = cur.sse;
  res.iterations = iter;
  std::vector<double> pred(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) pred[i] = model(res.params, dose, t[i]);
  res.r2 = r_squared(series, pred);

  const Eigen::Matrix3d jtj = cur.jac.transpose() * cur.jac;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(jtj);
  const double emax = eig.eigenvalues().maxCoeff();
  const double emin = eig.eigenvalues().minCoeff();
  if (!(emin > 0.0) || emax / emin > options.singular_condition) {
    res.covariance_status = CovarianceStatus::Singular;
  } else {
    const double m = static_cast<double>(t.size());
    const double sigma2 = cur.sse / (m - 3.0);
    const Eigen::Matrix3d cov = sigma2 * jtj.inverse();
    const double scale[3] = {res.params.ka, res.params.ke, res.params.gamma};
    std::array<double, 3> se{};
    for (int j = 0; j < 3; ++j) se[static_cast<std::size_t>(j)] = scale[j] * std::sqrt(cov(j, j));
    res.standard_errors = se;
  }

  if (!converged) throw FitNoConvergence("iteration limit reached", res);
  return res;
}

ConcentrationSeries predict(const std::vector<double>& times, const FitResult& fit, double dose,
                            double volume) {
  PkParams p = fit.params;
  p.volume = volume;
  validate_params(p);
  std::vector<SamplePoint> pts;
  pts.reserve(times.size());
  for (double t : times) pts.push_back({t, model(p, dose, t)});
  return ConcentrationSeries(std::move(pts));
}

CoverageSummary monte_carlo_coverage(const PkParams& truth, double dose, const std::vector<double>& times,
                                     double noise_fraction, std::size_t reps, std::uint64_t seed) {
  validate_params(truth);
  std::vector<double> clean;
  clean.reserve(times.size());
  for (double t : times) clean.push_back(model(truth, dose, t));
  CoverageSummary cs;
  cs.reps = reps;
  cs.noise_sd = noise_fraction * *std::max_element(clean.begin(), clean.end());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, cs.noise_sd);
  const double truth_v[3] = {truth.ka, truth.ke, truth.gamma};
  std::array<std::size_t, 3> hits{};
  std::size_t joint = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    std::vector<SamplePoint> pts;
    pts.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) pts.push_back({times[i], std::max(0.0, clean[i] + noise(rng))});
    try {
      const FitResult f = fit_single_dose(ConcentrationSeries(std::move(pts)), dose, truth.volume);
      if (!f.standard_errors) { ++cs.failures; continue; }
      const double est[3] = {f.params.ka, f.params.ke, f.params.gamma};
      bool all = true;
      for (std::size_t j = 0; j < 3; ++j) {
        const bool in = std::abs(est[j] - truth_v[j]) <= 3.0 * (*f.standard_errors)[j];
        hits[j] += in ? 1 : 0;
        all = all && in;
      }
      joint += all ? 1 : 0;
    } catch (const Error&) {
      ++cs.failures;
    }
  }
  const double n = reps == 0 ? 1.0 : static_cast<double>(reps);
  for (std::size_t j = 0; j < 3; ++j) cs.coverage[j] = static_cast<double>(hits[j]) / n;
  cs.joint_coverage = static_cast<double>(joint) / n;
  return cs;
}

}  // namespace gbf
