#pragma once

#include <cstdint>
#include <utility>

#include "lesbox/field.hpp"

namespace lesbox {

// Canonical solenoidal fields, set directly in spectral space so they are
// exact trigonometric polynomials.  "Mode 1" means one full period of the box.

// (cos x1 sin x2 sin x3, -sin x1 cos x2 sin x3, 0) scaled by amplitude.
SpectralField taylor_green(const TorusGrid& g, double amplitude);

// (0, amplitude * cos x1, 0): the nonlinear term vanishes identically, so the
// exact solution is pure viscous decay of the single coefficient.
SpectralField shear_mode(const TorusGrid& g, double amplitude);

// Vortex/current sheet pair, 2.5-D:
//   u = u_amp * (-sin x2,  sin x1, 0)
//   B = b_amp * (-sin x2,  sin 2 x1, 0)
std::pair<SpectralField, SpectralField> orszag_tang(const TorusGrid& g,
                                                    double u_amp,
                                                    double b_amp);

// Random solenoidal field: independent complex Gaussians per retained mode
// with standard deviation (1 + |k|^2)^(slope/2), Leray-projected, conjugate
// symmetric, normalized to the requested L2 norm.  Fully determined by seed.
SpectralField random_solenoidal(const TorusGrid& g, std::uint64_t seed,
                                double spectrum_slope, double amplitude);

// Steady low-mode solenoidal forcing
//   amplitude * (sin x3 + cos x2, sin x1 + cos x3, sin x2 + cos x1).
SpectralField abc_forcing(const TorusGrid& g, double amplitude);

} // namespace lesbox
