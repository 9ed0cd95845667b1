#pragma once

#include <array>
#include <string>

#include "lesbox/field.hpp"

namespace lesbox {

// Fractional smoothing kernel acting mode-by-mode:
//   m(k) = 1 / (1 + (alpha^2 |k|^2)^theta).
// alpha = 0 gives the identity; theta = 1/6 is the critical preset, theta = 1
// the classical one.
struct FilterParams {
  double alpha = 0.0;
  double theta = 1.0 / 6.0;
};

inline constexpr double theta_critical = 1.0 / 6.0;
inline constexpr double theta_classical = 1.0;

void validate_filter(const FilterParams& p);

double filter_multiplier(double ksq, const FilterParams& p);

SpectralField apply_filter(const SpectralField& f, const FilterParams& p);

// Exact per-mode inverse of apply_filter: multiplies by 1 + (alpha^2|k|^2)^theta.
SpectralField inverse_shift(const SpectralField& f, const FilterParams& p);

// Left side: ||filtered(f) - f|| in W^{s,2}; right side: the bound
// alpha^(2 theta) ||filtered(f)||_{W^{s+2 theta,2}}.  With homogeneous weights
// the two sides agree exactly; with full weights lhs <= rhs.  Requires
// alpha > 0.
struct DeviationBound {
  double lhs = 0.0;
  double rhs = 0.0;
};
DeviationBound filter_deviation_bound(const SpectralField& f, double s,
                                      const FilterParams& p,
                                      bool homogeneous = false);

// Scans every retained mode of a grid and verifies the pointwise bounds
//   |k|^beta m(k) <= alpha^-beta   and   m(k) <= 1,   0 <= beta <= 2 theta.
// Ratios are reported in scaled form (alpha^beta |k|^beta m(k)) so "pass"
// means max <= 1 up to roundoff slack.
struct LemmaScanReport {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  int grid_n = 0;
  double max_weighted_ratio = 0.0;
  std::array<int, 3> argmax_weighted{0, 0, 0};
  double max_symbol = 0.0;
  std::array<int, 3> argmax_symbol{0, 0, 0};
  double tolerance = 1e-14;
  bool pass = false;

  std::string to_json() const;
};
LemmaScanReport verify_lemma_bounds(const TorusGrid& g, const FilterParams& p,
                                    double beta);

} // namespace lesbox
