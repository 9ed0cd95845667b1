#pragma once

#include <vector>

#include "lesbox/field.hpp"

// Integrating-factor RK4 stage algebra, shared verbatim by the hydrodynamic
// and coupled solvers so that a vanishing second field reduces one to the
// other coefficient-for-coefficient.  The viscous factor is applied exactly,
// so a state with zero explicit tendency decays as exp(-nu |k|^2 t) to
// roundoff.
namespace lesbox::ifrk4 {

using Table = std::vector<double>;

// exp(-nu |k|^2 tau) per site.
Table viscous_table(const TorusGrid& g, double nu, double tau);

// u_a = E2 .* (u + h2 k1)
SpectralField stage_a(const SpectralField& u, const SpectralField& k1,
                      const Table& e2, double h2);
// u_b = E2 .* u + h2 k2
SpectralField stage_b(const SpectralField& u, const SpectralField& k2,
                      const Table& e2, double h2);
// u_c = E1 .* u + h (E2 .* k3)
SpectralField stage_c(const SpectralField& u, const SpectralField& k3,
                      const Table& e1, const Table& e2, double h);
// u' = E1 .* u + (h/6) (E1 .* k1 + 2 E2 .* (k2 + k3) + k4)
SpectralField combine(const SpectralField& u, const SpectralField& k1,
                      const SpectralField& k2, const SpectralField& k3,
                      const SpectralField& k4, const Table& e1,
                      const Table& e2, double h);

} // namespace lesbox::ifrk4
