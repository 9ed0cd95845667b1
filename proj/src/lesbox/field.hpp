#pragma once

#include <span>
#include <vector>

#include "lesbox/grid.hpp"

namespace lesbox {

// Spectral coefficients of a real field on the torus, component-major.
// components: 1 (scalar), 3 (vector), 9 (rank-2 tensor, slot t = 3*j + m
// holding T_{jm}).  Treated as immutable values by the operator layer; the
// flags record what the producing operation guarantees.
struct SpectralField {
  TorusGrid grid;
  int components = 0;
  bool zero_mean = false;
  bool divergence_free = false;
  std::vector<cplx> coef;

  static SpectralField zeros(const TorusGrid& g, int components);

  std::size_t site_count() const { return grid.site_count(); }
  std::span<cplx> comp(int c) {
    return {coef.data() + static_cast<std::size_t>(c) * site_count(),
            site_count()};
  }
  std::span<const cplx> comp(int c) const {
    return {coef.data() + static_cast<std::size_t>(c) * site_count(),
            site_count()};
  }
  cplx& at(int c, std::size_t idx) {
    return coef[static_cast<std::size_t>(c) * site_count() + idx];
  }
  const cplx& at(int c, std::size_t idx) const {
    return coef[static_cast<std::size_t>(c) * site_count() + idx];
  }

  double max_abs() const;
  bool all_finite() const;
};

} // namespace lesbox
