#pragma once

// Two variants of the multi-dose model:
//  - IV bolus: each dose adds delta_n to the concentration, which then only decays;
//  - finite absorption time (FAT): absorption runs for s_offset_n hours after
//    each dose, then stops; the gut is reset to d_n at every dose.

#include <cstddef>
#include <vector>

#include "gbf/core.hpp"

namespace gbf {

struct BolusEntry {
  double delta = 0.0;     // concentration added by the dose
  double interval = 0.0;  // hours until the next dose
};

class BolusRegimen {
 public:
  explicit BolusRegimen(std::vector<BolusEntry> entries);
  static BolusRegimen equi(double delta, double interval, std::size_t count);

  const std::vector<BolusEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<BolusEntry> entries_;
};

class BolusSolution {
 public:
  double ke() const noexcept { return ke_; }
  std::size_t cycle_count() const noexcept { return amplitudes_.size(); }

  /// Concentration right after dose n (running remainder + delta_n).
  double amplitude(std::size_t n) const;
  /// Concentration just before dose n+1; n = 0 gives 0.
  double remainder(std::size_t n) const;
  double dose_time(std::size_t n) const;

  std::size_t cycle_index(double t) const;
  /// Post-dose value at dose times; free decay after the last interval.
  double concentration(double t) const;
  /// Left limit, i.e. the pre-dose value at dose times.
  double concentration_before(double t) const;

 private:
  friend BolusSolution bolus_multidose(double ke, const BolusRegimen& r);
  BolusSolution() = default;

  double ke_ = 0.0;
  std::vector<double> times_;       // t_0..t_N
  std::vector<double> amplitudes_;  // cycles 1..N
  std::vector<double> remainders_;  // 0..N
};

/// Throws NonPositiveParameter for ke <= 0.
BolusSolution bolus_multidose(double ke, const BolusRegimen& r);

/// delta beta (1 - beta^n) / (1 - beta).
double bolus_equi_remainder(double ke, double delta, double tau, std::size_t n);
/// delta beta / (1 - beta).
double bolus_steady_remainder(double ke, double delta, double tau);

struct FatEntry {
  double dose = 0.0;      // mg
  double interval = 0.0;  // tau_n
  double s_offset = 0.0;  // absorption stops at t_{n-1} + s_offset, 0 < s_offset <= tau_n
};

class FatRegimen {
 public:
  explicit FatRegimen(std::vector<FatEntry> entries);
  static FatRegimen equi(double dose, double interval, double s_offset, std::size_t count);

  const std::vector<FatEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<FatEntry> entries_;
};

enum class FatPhase { Assimilation, Clearance };

const char* to_string(FatPhase p);

struct FatCycle {
  std::size_t n = 1;
  double t_start = 0.0;
  double s = 0.0;       // absolute end of absorption
  double t_end = 0.0;
  double dose = 0.0;
  double c1 = 0.0;      // K d_n + Rem2(n-1)
  double c2 = 0.0;      // K d_n
  double rem1 = 0.0;    // x(s_n)
  double rem2 = 0.0;    // x(t_n)
};

class FatSolution {
 public:
  const ValidatedParams& params() const noexcept { return p_; }
  std::size_t cycle_count() const noexcept { return cycles_.size(); }
  const FatCycle& cycle(std::size_t n) const;

  double rem1(std::size_t n) const { return cycle(n).rem1; }
  /// n = 0 gives 0.
  double rem2(std::size_t n) const;

  std::size_t cycle_index(double t) const;
  /// At s_n the clearance phase owns the point.
  FatPhase phase(double t) const;

  double concentration(double t) const;
  double gut_amount(double t) const;

  /// One-sided slopes of x at s_n.
  double slope_before_s(std::size_t n) const;
  double slope_after_s(std::size_t n) const;

 private:
  friend FatSolution fat_multidose(const ValidatedParams& p, const FatRegimen& r);
  explicit FatSolution(const ValidatedParams& p) : p_(p) {}

  ValidatedParams p_;
  std::vector<FatCycle> cycles_;
};

FatSolution fat_multidose(const ValidatedParams& p, const FatRegimen& r);

}  // namespace gbf
