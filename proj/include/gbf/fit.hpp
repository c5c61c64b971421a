#pragma once

// Single-dose parameter estimation: Levenberg-Marquardt on
// (log ka, log ke, log gamma) with dose and volume held fixed.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gbf/core.hpp"

namespace gbf {

enum class CovarianceStatus { Ok, Singular };

const char* to_string(CovarianceStatus s);

struct FitOptions {
  std::size_t max_iterations = 500;
  double rel_sse_tolerance = 1e-10;
  double gradient_tolerance = 1e-8;
  double initial_damping = 1e-3;
  double singular_condition = 1e12;
};

struct FitResult {
  PkParams params;
  double sse = 0.0;
  double r2 = 0.0;
  /// (ka, ke, gamma) standard errors in original units; absent when singular.
  std::optional<std::array<double, 3>> standard_errors;
  CovarianceStatus covariance_status = CovarianceStatus::Ok;
  std::size_t iterations = 0;
  /// SSE after each accepted step, starting with the initial guess.
  std::vector<double> sse_history;
};

/// Raised when the iteration limit is hit; carries the last iterate.
class FitNoConvergence : public Error {
 public:
  FitNoConvergence(const std::string& what, FitResult last)
      : Error(ErrorCode::NoConvergence, what), last_(std::move(last)) {}
  const FitResult& last() const noexcept { return last_; }

 private:
  FitResult last_;
};

/// Heuristic start: terminal log-slope for ke, ka = 5 ke, gamma from the peak.
PkParams initial_guess(const ConcentrationSeries& series, double dose, double volume);

/// Partials of x(t) with respect to (ka, ke, gamma), one row per time.
std::vector<std::array<double, 3>> bateman_jacobian(const PkParams& p, double dose,
                                                    const std::vector<double>& times);

/// Throws InsufficientData for fewer than 4 points.
FitResult fit_single_dose(const ConcentrationSeries& series, double dose, double volume,
                          std::optional<PkParams> init = std::nullopt,
                          const FitOptions& options = {});

ConcentrationSeries predict(const std::vector<double>& times, const FitResult& fit, double dose,
                            double volume);

/// 1 - SSE/SST of predictions against the series.
double r_squared(const ConcentrationSeries& series, const std::vector<double>& predicted);

struct CoverageSummary {
  std::size_t reps = 0;
  std::size_t failures = 0;  // fits that threw or came back singular
  double noise_sd = 0.0;
  std::array<double, 3> coverage{};  // fraction with |estimate - truth| <= 3 SE
  double joint_coverage = 0.0;       // all three at once
};

/// Refit `reps` noisy copies of the truth curve sampled at `times`. Noise is
/// Gaussian with sd = noise_fraction * max sampled concentration; negative
/// noisy values are clipped to 0. Failed fits count as not covered.
CoverageSummary monte_carlo_coverage(const PkParams& truth, double dose, const std::vector<double>& times,
                                     double noise_fraction, std::size_t reps, std::uint64_t seed);

}  // namespace gbf
