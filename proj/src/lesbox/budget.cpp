#include "lesbox/budget.hpp"

#include <cmath>
#include <stdexcept>

#include "lesbox/ops.hpp"

namespace lesbox {

BudgetWeights make_budget_weights(const TorusGrid& g, double theta) {
  const std::vector<double>& ksq = g.tables->ksq;
  BudgetWeights w;
  w.theta_w.resize(ksq.size());
  w.theta1_w.resize(ksq.size());
  for (std::size_t i = 0; i < ksq.size(); ++i) {
    w.theta_w[i] = std::pow(ksq[i], theta);
    w.theta1_w[i] = std::pow(ksq[i], 1.0 + theta);
  }
  return w;
}

BudgetSample nse_budget_sample(const FlowState& s, const NSEConfig& cfg,
                               const BudgetWeights& w) {
  const TorusGrid& g = s.w.grid;
  const std::vector<double>& ksq = g.tables->ksq;
  const double vol = g.period * g.period * g.period;
  const double a = std::pow(cfg.filter.alpha, 2.0 * cfg.filter.theta);
  const std::size_t total = s.w.site_count();

  KahanSum<long double> e_acc, d_acc, p_acc;
  for (int c = 0; c < 3; ++c) {
    std::span<const cplx> wc = s.w.comp(c);
    std::span<const cplx> fc =
        cfg.forcing ? cfg.forcing->comp(c) : std::span<const cplx>{};
    for (std::size_t i = 0; i < total; ++i) {
      const double m2 = std::norm(wc[i]);
      e_acc.add(static_cast<long double>(m2) * (1.0 + a * w.theta_w[i]));
      d_acc.add(static_cast<long double>(m2) *
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
  out.dissipation = static_cast<double>(cfg.nu * vol * d_acc.value());
  out.forcing_power = static_cast<double>(vol * p_acc.value());
  return out;
}

std::vector<double> cubic_cumulative(double h, std::span<const double> g) {
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const long double hl = h;
  KahanSum<long double> acc;
  for (std::size_t i = 1; i < n; ++i) {
    long double panel;
    if (n < 4) {
      panel = 0.5L * hl * (static_cast<long double>(g[i - 1]) + g[i]);
    } else if (i == 1) {
      panel = hl / 24.0L *
              (9.0L * g[0] + 19.0L * g[1] - 5.0L * g[2] + g[3]);
    } else if (i == n - 1) {
      panel = hl / 24.0L *
              (g[n - 4] - 5.0L * g[n - 3] + 19.0L * g[n - 2] +
               9.0L * g[n - 1]);
    } else {
      panel = hl / 24.0L *
              (-static_cast<long double>(g[i - 2]) + 13.0L * g[i - 1] +
               13.0L * g[i] - g[i + 1]);
    }
    acc.add(panel);
    out[i] = static_cast<double>(acc.value());
  }
  return out;
}

std::vector<EnergyBudget> integrate_budget(std::span<const BudgetSample> s) {
  const std::size_t n = s.size();
  std::vector<EnergyBudget> rows(n);
  if (n == 0) return rows;
  double h = 0.0;
  if (n >= 2) {
    h = s[1].time - s[0].time;
    if (!(h > 0.0))
      throw std::invalid_argument("budget: samples must advance in time");
    for (std::size_t i = 1; i < n; ++i) {
      const double step = s[i].time - s[i - 1].time;
      if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(s[i].time)))
        throw std::invalid_argument("budget: samples must be uniform in time");
    }
  }
  std::vector<double> diss(n), pow_(n);
  for (std::size_t i = 0; i < n; ++i) {
    diss[i] = s[i].dissipation;
    pow_[i] = s[i].forcing_power;
  }
  const std::vector<double> idiss = cubic_cumulative(h, diss);
  const std::vector<double> ipow = cubic_cumulative(h, pow_);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].time = s[i].time;
    rows[i].model_energy = s[i].energy;
    rows[i].dissipation_rate = s[i].dissipation;
    rows[i].forcing_power = s[i].forcing_power;
    rows[i].budget_residual =
        (s[i].energy - s[0].energy) + idiss[i] - ipow[i];
  }
  return rows;
}

std::vector<EnergyBudget> energy_budget(std::span<const FlowState> states,
                                        const NSEConfig& cfg) {
  if (states.empty()) return {};
  const BudgetWeights w =
      make_budget_weights(states[0].w.grid, cfg.filter.theta);
  std::vector<BudgetSample> samples;
  samples.reserve(states.size());
  for (const FlowState& s : states)
    samples.push_back(nse_budget_sample(s, cfg, w));
  return integrate_budget(samples);
}

} // namespace lesbox
