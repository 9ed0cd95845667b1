#include "lesbox/field.hpp"

#include <cmath>
#include <stdexcept>

namespace lesbox {

SpectralField SpectralField::zeros(const TorusGrid& g, int components) {
  if (components != 1 && components != 3 && components != 9)
    throw std::invalid_argument("field: components must be 1, 3 or 9");
  SpectralField f;
  f.grid = g;
  f.components = components;
  f.coef.assign(static_cast<std::size_t>(components) * g.site_count(),
                cplx{0.0, 0.0});
  return f;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const cplx& c : coef) {
    const double a = std::abs(c.real()) + std::abs(c.imag());
    if (a > m) m = a;
  }
  return m;
}

bool SpectralField::all_finite() const {
  for (const cplx& c : coef)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

} // namespace lesbox
