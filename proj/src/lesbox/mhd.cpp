#include "lesbox/mhd.hpp"

#include <cmath>
#include <stdexcept>

#include "lesbox/ifrk4.hpp"
#include "lesbox/ops.hpp"

namespace lesbox {

void validate_mhd(const MHDConfig& cfg, const TorusGrid& g) {
  validate_filter(cfg.filter);
  if (!(cfg.nu1 > 0.0) || !(cfg.nu2 > 0.0))
    throw std::invalid_argument("mhd: nu1 and nu2 must be positive");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw std::invalid_argument("mhd: dt must be positive");
  if (cfg.t_end < 0.0 || !std::isfinite(cfg.t_end))
    throw std::invalid_argument("mhd: t_end must be >= 0");
  const double steps = cfg.t_end / cfg.dt;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(1.0, steps))
    throw std::invalid_argument("mhd: t_end must be an integer number of dt");
  if (cfg.forcing) {
    if (!same_grid(cfg.forcing->grid, g))
      throw std::invalid_argument("mhd: forcing grid mismatch");
    if (cfg.forcing->components != 3)
      throw std::invalid_argument("mhd: forcing must be a vector field");
  }
}

MhdTendency mhd_nonlinear(const SpectralField& w, const SpectralField& b,
                          const FilterParams& p) {
  if (w.components != 3 || b.components != 3)
    throw std::invalid_argument("mhd: tendencies need vector fields");
  if (!same_grid(w.grid, b.grid))
    throw std::invalid_argument("mhd: fields live on different grids");

  SpectralField tww = apply_filter(dealiased_product(w, w), p);
  SpectralField tbb = apply_filter(dealiased_product(b, b), p);
  SpectralField twb = apply_filter(dealiased_product(w, b), p);
  // (b (x) w)_{jm} = b_j w_m is the transpose of (w (x) b); the pointwise
  // products are identical, so no extra transforms are needed.
  SpectralField tbw = transpose_tensor(twb);

  MhdTendency t;
  t.dw = leray_project(subtract(divergence(tbb), divergence(tww)));
  enforce_zero_mean(t.dw);
  t.db = leray_project(subtract(divergence(tbw), divergence(twb)));
  enforce_zero_mean(t.db);
  return t;
}

MhdTendency mhd_rhs(const MHDState& s, const MHDConfig& cfg) {
  MhdTendency t = mhd_nonlinear(s.w, s.b, cfg.filter);
  if (cfg.forcing) t.dw = add(t.dw, *cfg.forcing);
  return t;
}

MhdIntegrator::MhdIntegrator(const TorusGrid& g, const MHDConfig& cfg)
    : cfg_(cfg) {
  validate_mhd(cfg_, g);
  ew_full_ = ifrk4::viscous_table(g, cfg_.nu1, cfg_.dt);
  ew_half_ = ifrk4::viscous_table(g, cfg_.nu1, 0.5 * cfg_.dt);
  eb_full_ = ifrk4::viscous_table(g, cfg_.nu2, cfg_.dt);
  eb_half_ = ifrk4::viscous_table(g, cfg_.nu2, 0.5 * cfg_.dt);
}

MHDState MhdIntegrator::advance(const MHDState& s) const {
  const double dt = cfg_.dt;
  auto rhs = [&](const SpectralField& w, const SpectralField& b) {
    MHDState tmp{w, b, 0.0};
    return mhd_rhs(tmp, cfg_);
  };

  const MhdTendency k1 = rhs(s.w, s.b);
  const SpectralField wa = ifrk4::stage_a(s.w, k1.dw, ew_half_, 0.5 * dt);
  const SpectralField ba = ifrk4::stage_a(s.b, k1.db, eb_half_, 0.5 * dt);
  const MhdTendency k2 = rhs(wa, ba);
  const SpectralField wb = ifrk4::stage_b(s.w, k2.dw, ew_half_, 0.5 * dt);
  const SpectralField bb = ifrk4::stage_b(s.b, k2.db, eb_half_, 0.5 * dt);
  const MhdTendency k3 = rhs(wb, bb);
  const SpectralField wc =
      ifrk4::stage_c(s.w, k3.dw, ew_full_, ew_half_, dt);
  const SpectralField bc =
      ifrk4::stage_c(s.b, k3.db, eb_full_, eb_half_, dt);
  const MhdTendency k4 = rhs(wc, bc);

  SpectralField wn =
      ifrk4::combine(s.w, k1.dw, k2.dw, k3.dw, k4.dw, ew_full_, ew_half_, dt);
  SpectralField bn =
      ifrk4::combine(s.b, k1.db, k2.db, k3.db, k4.db, eb_full_, eb_half_, dt);
  for (SpectralField* f : {&wn, &bn}) {
    apply_dealias_mask(*f);
    *f = leray_project(*f);
    enforce_zero_mean(*f);
    symmetrize(*f);
  }
  return {std::move(wn), std::move(bn), s.time + dt};
}

MHDState mhd_step(const MHDState& s, const MHDConfig& cfg) {
  return MhdIntegrator(s.w.grid, cfg).advance(s);
}

BudgetSample mhd_budget_sample(const MHDState& s, const MHDConfig& cfg,
                               const BudgetWeights& w) {
  const TorusGrid& g = s.w.grid;
  const std::vector<double>& ksq = g.tables->ksq;
  const double vol = g.period * g.period * g.period;
  const double a = std::pow(cfg.filter.alpha, 2.0 * cfg.filter.theta);
  const std::size_t total = s.w.site_count();

  KahanSum<long double> e_acc, d_acc, p_acc;
  for (int c = 0; c < 3; ++c) {
    std::span<const cplx> wc = s.w.comp(c);
    std::span<const cplx> bc = s.b.comp(c);
    std::span<const cplx> fc =
        cfg.forcing ? cfg.forcing->comp(c) : std::span<const cplx>{};
    for (std::size_t i = 0; i < total; ++i) {
      const double mw = std::norm(wc[i]);
      const double mb = std::norm(bc[i]);
      e_acc.add(static_cast<long double>(mw + mb) *
                (1.0 + a * w.theta_w[i]));
      d_acc.add(static_cast<long double>(cfg.nu1 * mw + cfg.nu2 * mb) *
                (ksq[i] + a * w.theta1_w[i]));
      if (cfg.forcing) {
        const double re = fc[i].real() * wc[i].real() +
                          fc[i].imag() * wc[i].imag();
        p_acc.add(static_cast<long double>(re) * (1.0 + a * w.theta_w[i]));
      }
    }
  }
  BudgetSample out;
  out.time = s.time;
  out.energy = static_cast<double>(0.5L * vol * e_acc.value());
  out.dissipation = static_cast<double>(vol * d_acc.value());
  out.forcing_power = static_cast<double>(vol * p_acc.value());
  return out;
}

std::vector<EnergyBudget> mhd_energy_budget(std::span<const MHDState> states,
                                            const MHDConfig& cfg) {
  if (states.empty()) return {};
  const BudgetWeights w =
      make_budget_weights(states[0].w.grid, cfg.filter.theta);
  std::vector<BudgetSample> samples;
  samples.reserve(states.size());
  for (const MHDState& s : states)
    samples.push_back(mhd_budget_sample(s, cfg, w));
  return integrate_budget(samples);
}

double cancellation_check(const MHDState& s, const FilterParams& p) {
  const MhdTendency t = mhd_nonlinear(s.w, s.b, p);
  const double flux = inner_l2(t.dw, inverse_shift(s.w, p)) +
                      inner_l2(t.db, inverse_shift(s.b, p));
  const SobolevIndex l2{0.0, false};
  const double scale = sobolev_norm(s.w, l2) * sobolev_norm(t.dw, l2) +
                       sobolev_norm(s.b, l2) * sobolev_norm(t.db, l2);
  if (scale == 0.0) return 0.0;
  return std::abs(flux) / scale;
}

} // namespace lesbox
