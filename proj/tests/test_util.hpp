#pragma once

// Shared helpers for the unit suites.

#include <cmath>
#include <complex>

#include "lesbox/field.hpp"
#include "lesbox/grid.hpp"
#include "lesbox/ops.hpp"
#include "lesbox/rng.hpp"

namespace testutil {

using lesbox::cplx;
using lesbox::SpectralField;
using lesbox::TorusGrid;

// General (not solenoidal) conjugate-symmetric field with Gaussian modes on
// the retained lattice.  Deterministic in (seed, grid, components).
inline SpectralField random_symmetric(const TorusGrid& g, std::uint64_t seed,
                                      int components) {
  SpectralField f = SpectralField::zeros(g, components);
  lesbox::CounterRng rng{seed};
  const std::size_t total = g.site_count();
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (!g.tables->keep[idx]) continue;
    const std::size_t ridx = g.tables->reflect[idx];
    if (ridx < idx) continue;
    for (int c = 0; c < components; ++c) {
      const auto [re, im] = rng.normal_pair(
          static_cast<std::uint64_t>(c) + 1, static_cast<std::uint64_t>(idx));
      if (ridx == idx) {
        f.at(c, idx) = cplx{re, 0.0};
      } else {
        f.at(c, idx) = cplx{re, im};
        f.at(c, ridx) = std::conj(f.at(c, idx));
      }
    }
  }
  std::size_t zero = g.site_of_modes(0, 0, 0);
  for (int c = 0; c < components; ++c) f.at(c, zero) = cplx{0.0, 0.0};
  return f;
}

// Largest |a - b| coefficient difference across components.
inline double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coef.size(); ++i)
    m = std::max(m, std::abs(a.coef[i] - b.coef[i]));
  return m;
}

// max_diff scaled by the larger of the two amplitudes.
inline double rel_max_diff(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(a.max_abs(), b.max_abs());
  if (scale == 0.0) return max_diff(a, b);
  return max_diff(a, b) / scale;
}

// Exact coefficient equality, bit for bit.
inline bool identical(const SpectralField& a, const SpectralField& b) {
  if (a.coef.size() != b.coef.size()) return false;
  for (std::size_t i = 0; i < a.coef.size(); ++i) {
    if (a.coef[i].real() != b.coef[i].real()) return false;
    if (a.coef[i].imag() != b.coef[i].imag()) return false;
  }
  return true;
}

} // namespace testutil
