#pragma once

#include <optional>
#include <vector>

#include "lesbox/field.hpp"
#include "lesbox/filter.hpp"

namespace lesbox {

// Filtered incompressible momentum model on the torus:
//   w_t + div(filter(w (x) w)) - nu Lap w + grad q = f,  div w = 0,
// integrated in the Leray-projected spectral form with an integrating-factor
// RK4 step (the viscous half is exact).
struct NSEConfig {
  double nu = 0.0;
  FilterParams filter;
  double dt = 0.0;
  double t_end = 0.0;
  // Already-filtered solenoidal zero-mean forcing; empty means none.
  std::optional<SpectralField> forcing;
};

struct FlowState {
  SpectralField w;
  double time = 0.0;
};

void validate_nse(const NSEConfig& cfg, const TorusGrid& g);

// P(-div(filter(dealiased w (x) w))): the advective tendency.  Masked,
// zero-mean, divergence-free.
SpectralField nonlinear_term(const SpectralField& w, const FilterParams& p);

// q_hat = -k^T T_hat k / |k|^2 (zero at k = 0) for a rank-2 tensor T.
SpectralField pressure_from_tensor(const SpectralField& tensor);

// Pressure consistent with the projected tendency: grad q equals the
// k-parallel part of -div(filter(w (x) w)).
SpectralField pressure_solve(const SpectralField& w, const FilterParams& p);

// nonlinear_term plus forcing.
SpectralField rhs_explicit(const SpectralField& w, const NSEConfig& cfg);

// Caches the viscous tables for repeated steps.
class NseIntegrator {
 public:
  NseIntegrator(const TorusGrid& g, const NSEConfig& cfg);
  FlowState advance(const FlowState& s) const;
  const NSEConfig& config() const { return cfg_; }

 private:
  NSEConfig cfg_;
  std::vector<double> e_full_, e_half_;
};

// Single step convenience wrapper.
FlowState step(const FlowState& s, const NSEConfig& cfg);

// Perturbation growth probe: integrates the base state and a perturbed copy
// side by side and records the W^{1/6,2} separation against the exponential
// envelope exp(C int ||w||^2_{W^{1+1/6,2}}).
struct DependenceReport {
  std::vector<double> times;
  std::vector<double> separation;     // ||w2 - w1||_{W^{1/6,2}}
  std::vector<double> envelope_integral; // int_0^t ||w1||^2_{W^{7/6,2}}
  double fitted_rate = 0.0;           // smallest C making the envelope hold
  bool envelope_holds = false;        // with fitted_rate and 1e-9 slack
};
DependenceReport continuous_dependence_probe(const SpectralField& w0,
                                             double perturbation_size,
                                             std::uint64_t seed,
                                             const NSEConfig& cfg);

} // namespace lesbox
