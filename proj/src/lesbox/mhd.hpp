#pragma once

#include <optional>
#include <vector>

#include "lesbox/budget.hpp"
#include "lesbox/field.hpp"
#include "lesbox/filter.hpp"

namespace lesbox {

// Filtered incompressible MHD on the torus: velocity w and magnetic field b,
// both solenoidal and zero-mean,
//   w_t + div(filter(w (x) w)) - div(filter(b (x) b)) - nu1 Lap w + grad q = f
//   b_t + div(filter(w (x) b)) - div(filter(b (x) w)) - nu2 Lap b = 0.
// With b = 0 the w update reduces coefficient-for-coefficient to the
// hydrodynamic solver.
struct MHDConfig {
  double nu1 = 0.0; // viscosity
  double nu2 = 0.0; // resistivity
  FilterParams filter;
  double dt = 0.0;
  double t_end = 0.0;
  std::optional<SpectralField> forcing; // acts on the momentum equation
};

struct MHDState {
  SpectralField w;
  SpectralField b;
  double time = 0.0;
};

struct MhdTendency {
  SpectralField dw;
  SpectralField db;
};

void validate_mhd(const MHDConfig& cfg, const TorusGrid& g);

// Advective/Lorentz tendencies (no forcing):
//   dw = P(div(filter(b (x) b)) - div(filter(w (x) w)))
//   db =   div(filter(b (x) w)) - div(filter(w (x) b))
// db is solenoidal identically (the coupling tensor is antisymmetric); both
// are projected as a roundoff safeguard.
MhdTendency mhd_nonlinear(const SpectralField& w, const SpectralField& b,
                          const FilterParams& p);

MhdTendency mhd_rhs(const MHDState& s, const MHDConfig& cfg);

class MhdIntegrator {
 public:
  MhdIntegrator(const TorusGrid& g, const MHDConfig& cfg);
  MHDState advance(const MHDState& s) const;
  const MHDConfig& config() const { return cfg_; }

 private:
  MHDConfig cfg_;
  std::vector<double> ew_full_, ew_half_, eb_full_, eb_half_;
};

MHDState mhd_step(const MHDState& s, const MHDConfig& cfg);

// Combined-energy budget terms: E and D sum the velocity and magnetic
// contributions with their respective coefficients.
BudgetSample mhd_budget_sample(const MHDState& s, const MHDConfig& cfg,
                               const BudgetWeights& w);
std::vector<EnergyBudget> mhd_energy_budget(std::span<const MHDState> states,
                                            const MHDConfig& cfg);

// Relative size of the coupled nonlinear energy flux
//   (dw, w + alpha^(2 theta) (-Lap)^theta w)
//     + (db, b + alpha^(2 theta) (-Lap)^theta b),
// which cancels exactly for the continuum system.  Scaled by
// ||w|| ||dw|| + ||b|| ||db||.
double cancellation_check(const MHDState& s, const FilterParams& p);

} // namespace lesbox
