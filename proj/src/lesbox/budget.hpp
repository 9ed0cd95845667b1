#pragma once

#include <span>
#include <vector>

#include "lesbox/nse.hpp"

namespace lesbox {

// Instantaneous terms of the model energy balance
//   d/dt E + D = P,
//   E = 1/2 (||w||^2 + alpha^(2 theta) ||w||^2_{H^theta}),
//   D = nu (||w||^2_{H^1} + alpha^(2 theta) ||w||^2_{H^(1+theta)}),
//   P = (f, w + alpha^(2 theta) (-Lap)^theta w),
// with homogeneous seminorms throughout.
struct BudgetSample {
  double time = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double forcing_power = 0.0;
};

struct EnergyBudget {
  double time = 0.0;
  double model_energy = 0.0;
  double dissipation_rate = 0.0;
  double forcing_power = 0.0;
  // E(t) - E(0) + int_0^t D - int_0^t P, integrals by the piecewise-cubic
  // quadrature below.
  double budget_residual = 0.0;
};

// |k|^(2 theta) and |k|^(2 + 2 theta) lookup tables for one grid.
struct BudgetWeights {
  std::vector<double> theta_w;
  std::vector<double> theta1_w;
};
BudgetWeights make_budget_weights(const TorusGrid& g, double theta);

BudgetSample nse_budget_sample(const FlowState& s, const NSEConfig& cfg,
                               const BudgetWeights& w);

// Cumulative integral of uniformly sampled data. Each step is integrated
// with the cubic through the four nearest samples (one-sided stencils at
// the ends), so every partial integral is fourth-order accurate, matching
// the integrator; the budget residual then measures the time-discretization
// error rather than the quadrature's. Fewer than four samples fall back to
// plain trapezoid panels.
std::vector<double> cubic_cumulative(double h, std::span<const double> g);

std::vector<EnergyBudget> integrate_budget(std::span<const BudgetSample> s);

// Convenience wrapper: samples every state, then integrates.
std::vector<EnergyBudget> energy_budget(std::span<const FlowState> states,
                                        const NSEConfig& cfg);

} // namespace lesbox
