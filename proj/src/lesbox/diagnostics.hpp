#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lesbox/field.hpp"

namespace lesbox {

// Shell-binned energy: E(j) = 1/2 period^3 sum_{j-1/2 <= |k| < j+1/2} |f|^2,
// j = 0 .. ceil(max |k|).  Sums to the total energy of the field.
std::vector<double> shell_spectrum(const SpectralField& f);

// Norms of a - b: L2 from the coefficients (Parseval), Lp from real-space
// quadrature of the pointwise Euclidean magnitude with weight (period/n)^3.
struct DifferenceNorms {
  double l2 = 0.0;
  std::vector<std::pair<double, double>> lp; // (p, value)
};
DifferenceNorms difference_norms(const SpectralField& a,
                                 const SpectralField& b,
                                 std::span<const double> p_list);

// One model run inside a filter-scale sweep.
struct SweepSample {
  SpectralField velocity;
  std::optional<SpectralField> pressure;
  std::optional<SpectralField> magnetic;
  bool diverged = false;
  double wall_seconds = 0.0;
};

struct ConvergenceRecord {
  double alpha = 0.0;
  bool diverged = false;
  double wall_seconds = 0.0;
  double velocity_error_l2 = 0.0;
  std::vector<std::pair<double, double>> velocity_error_lp;
  double pressure_error_l2 = 0.0; // 0 when no pressure was sampled
  double magnetic_error_l2 = 0.0; // 0 when no magnetic field was sampled
  std::vector<std::pair<double, double>> magnetic_error_lp;
};

struct SweepResult {
  std::vector<ConvergenceRecord> records; // one per alpha, descending
  bool velocity_strictly_decreasing = false;
  bool pressure_strictly_decreasing = false;
  bool magnetic_strictly_decreasing = false;
  // Least-squares slope of log(velocity L2 error) against log(alpha).
  double velocity_slope = 0.0;
};

// Runs `run` for every alpha (strictly descending, all positive) and compares
// against the alpha = 0 reference sample.  The callback owns all model
// details; this layer only validates, differences, and aggregates.
SweepResult alpha_sweep(std::span<const double> alphas,
                        const SweepSample& reference,
                        const std::function<SweepSample(double)>& run,
                        std::span<const double> p_list);

} // namespace lesbox
