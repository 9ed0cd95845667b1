#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lesbox/flows.hpp"
#include "lesbox/mhd.hpp"
#include "lesbox/nse.hpp"
#include "lesbox/ops.hpp"
#include "lesbox/runner.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lesbox;
using testutil::identical;
using testutil::rel_max_diff;

namespace {

MHDConfig coupled_config(double nu1, double nu2, double alpha, double dt,
                         double t_end) {
  MHDConfig cfg;
  cfg.nu1 = nu1;
  cfg.nu2 = nu2;
  cfg.filter = {alpha, theta_critical};
  cfg.dt = dt;
  cfg.t_end = t_end;
  return cfg;
}

} // namespace

TEST_CASE("coupled configuration validation") {
  TorusGrid g = make_grid(8);
  CHECK_NOTHROW(validate_mhd(coupled_config(0.1, 0.2, 0.1, 1e-3, 1.0), g));
  CHECK_THROWS_AS(validate_mhd(coupled_config(0.0, 0.2, 0.1, 1e-3, 1.0), g),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_mhd(coupled_config(0.1, 0.0, 0.1, 1e-3, 1.0), g),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_mhd(coupled_config(0.1, 0.2, 0.1, 1e-3, 1.0007), g),
                  std::invalid_argument);
}

TEST_CASE("coupled tendencies match the direct-convolution reference") {
  TorusGrid g = make_grid(4);
  const FilterParams p{0.3, theta_critical};
  for (std::uint64_t seed : {301u, 302u, 303u}) {
    SpectralField w = random_solenoidal(g, seed, -2.0, 1.0);
    SpectralField b = random_solenoidal(g, seed + 50, -2.0, 0.7);
    MhdTendency fast = mhd_nonlinear(w, b, p);
    auto [dw, db] = oracle::mhd_tendency(w, b, p);
    CHECK(rel_max_diff(fast.dw, dw) <= 1e-12);
    CHECK(rel_max_diff(fast.db, db) <= 1e-12);
  }
}

TEST_CASE("degenerate couplings collapse exactly") {
  TorusGrid g = make_grid(8);
  const FilterParams p{0.2, theta_critical};
  SUBCASE("zero magnetic field reduces dw to the hydrodynamic tendency") {
    SpectralField w = random_solenoidal(g, 304, -2.0, 1.0);
    SpectralField b = SpectralField::zeros(g, 3);
    MhdTendency t = mhd_nonlinear(w, b, p);
    CHECK(identical(t.dw, nonlinear_term(w, p)));
    CHECK(t.db.max_abs() == 0.0);
  }
  SUBCASE("aligned fields are a nonlinear steady state") {
    SpectralField w = random_solenoidal(g, 305, -2.0, 1.0);
    MhdTendency t = mhd_nonlinear(w, w, p);
    CHECK(t.dw.max_abs() == 0.0); // tensors cancel pairwise, bit for bit
    CHECK(t.db.max_abs() == 0.0);
  }
}

TEST_CASE("coupled tendency structure") {
  TorusGrid g = make_grid(8);
  const FilterParams p{0.15, theta_critical};
  SpectralField w = random_solenoidal(g, 306, -2.0, 1.0);
  SpectralField b = random_solenoidal(g, 307, -2.0, 0.5);
  MhdTendency t = mhd_nonlinear(w, b, p);
  for (const SpectralField* f : {&t.dw, &t.db}) {
    CHECK(max_divergence(*f) <= 1e-12 * f->max_abs());
    CHECK(max_conjugate_asymmetry(*f) <= 1e-13 * f->max_abs());
    for (int c = 0; c < 3; ++c)
      CHECK(f->at(c, g.site_of_modes(0, 0, 0)) == cplx{0.0, 0.0});
    for (std::size_t idx = 0; idx < g.site_count(); ++idx)
      if (!g.tables->keep[idx])
        for (int c = 0; c < 3; ++c) CHECK(f->at(c, idx) == cplx{0.0, 0.0});
  }
}

TEST_CASE("nonlinear energy flux cancels across the coupling") {
  TorusGrid g = make_grid(8);
  for (double alpha : {0.0, 0.3}) {
    const FilterParams p{alpha, theta_critical};
    for (std::uint64_t seed : {311u, 312u, 313u}) {
      MHDState s{random_solenoidal(g, seed, -2.0, 1.0),
                 random_solenoidal(g, seed + 80, -2.0, 0.8), 0.0};
      CHECK(cancellation_check(s, p) <= 1e-12);
    }
  }
  SUBCASE("zero state reports zero") {
    MHDState s{SpectralField::zeros(g, 3), SpectralField::zeros(g, 3), 0.0};
    CHECK(cancellation_check(s, {0.1, theta_critical}) == 0.0);
  }
}

TEST_CASE("vortex/current sheet initial state") {
  TorusGrid g = make_grid(8);
  auto [u, b] = orszag_tang(g, 1.0, 0.5);
  CHECK(max_divergence(u) == 0.0);
  CHECK(max_divergence(b) == 0.0);
  CHECK(max_conjugate_asymmetry(u) == 0.0);
  CHECK(max_conjugate_asymmetry(b) == 0.0);
  // u0 = -sin x1 lives on (0, +-1, 0); b1 = 0.5 sin 2 x0 on (+-2, 0, 0).
  CHECK(std::abs(u.at(0, g.site_of_modes(0, 1, 0)) - cplx{0.0, 0.5}) <= 1e-15);
  CHECK(std::abs(b.at(1, g.site_of_modes(2, 0, 0)) - cplx{0.0, -0.25}) <=
        1e-15);
  CHECK(u.at(2, g.site_of_modes(0, 1, 0)) == cplx{0.0, 0.0});
}

TEST_CASE("parallel shear pair decays exactly at two distinct rates") {
  // w = (0, a cos x0, 0), b = (0, c cos x0, 0): every coupling tensor sits in
  // the (1,1) slot with modes along axis 0, so all tendencies vanish and each
  // field decays with its own coefficient.
  TorusGrid g = make_grid(8);
  const double nu1 = 0.1, nu2 = 0.04;
  MHDConfig cfg = coupled_config(nu1, nu2, 0.1, 1e-3, 0.2);
  MhdIntegrator integ(g, cfg);
  SpectralField b0 = shear_mode(g, 0.8);
  MHDState s{shear_mode(g, 1.5), b0, 0.0};
  const long steps = std::lround(cfg.t_end / cfg.dt);
  for (long i = 0; i < steps; ++i) s = integ.advance(s);
  const double ww = 0.75 * std::exp(-nu1 * cfg.t_end);
  const double bb = 0.40 * std::exp(-nu2 * cfg.t_end);
  CHECK(std::abs(s.w.at(1, g.site_of_modes(1, 0, 0)).real() - ww) <=
        1e-12 * ww);
  CHECK(std::abs(s.b.at(1, g.site_of_modes(1, 0, 0)).real() - bb) <=
        1e-12 * bb);
}

TEST_CASE("with a vanishing magnetic field the coupled stepper is the "
          "hydrodynamic stepper, coefficient for coefficient") {
  TorusGrid g = make_grid(8);
  const double nu = 0.02, dt = 5e-3, T = 0.25;
  MHDConfig mcfg = coupled_config(nu, 0.37, 0.1, dt, T); // nu2 must not matter
  NSEConfig ncfg;
  ncfg.nu = nu;
  ncfg.filter = mcfg.filter;
  ncfg.dt = dt;
  ncfg.t_end = T;
  MhdIntegrator mi(g, mcfg);
  NseIntegrator ni(g, ncfg);
  MHDState ms{random_solenoidal(g, 321, -2.0, 1.0), SpectralField::zeros(g, 3),
              0.0};
  FlowState ns{ms.w, 0.0};
  for (int i = 0; i < 50; ++i) {
    ms = mi.advance(ms);
    ns = ni.advance(ns);
    REQUIRE(identical(ms.w, ns.w));
    REQUIRE(ms.b.max_abs() == 0.0);
  }
}

TEST_CASE("single coupled step equals the cached-integrator step") {
  TorusGrid g = make_grid(8);
  MHDConfig cfg = coupled_config(0.1, 0.05, 0.2, 1e-2, 1e-2);
  auto [u, b] = orszag_tang(g, 1.0, 0.5);
  MHDState s{u, b, 0.0};
  MHDState via_wrapper = mhd_step(s, cfg);
  MHDState via_integ = MhdIntegrator(g, cfg).advance(s);
  CHECK(identical(via_wrapper.w, via_integ.w));
  CHECK(identical(via_wrapper.b, via_integ.b));
}

TEST_CASE("combined energy budget closes to quadrature accuracy") {
  TorusGrid g = make_grid(8);
  MHDConfig cfg = coupled_config(0.1, 0.08, 0.1, 1e-3, 0.05);
  MhdIntegrator integ(g, cfg);
  auto [u, b] = orszag_tang(g, 1.0, 0.7);
  std::vector<MHDState> states{MHDState{u, b, 0.0}};
  const long steps = std::lround(cfg.t_end / cfg.dt);
  for (long i = 0; i < steps; ++i) states.push_back(integ.advance(states.back()));
  const std::vector<EnergyBudget> rows = mhd_energy_budget(states, cfg);
  REQUIRE(rows.size() == states.size());
  const double e0 = rows.front().model_energy;
  CHECK(e0 > 0.0);
  for (const EnergyBudget& r : rows) {
    CHECK(std::abs(r.budget_residual) <= 1e-9 * e0);
    CHECK(r.forcing_power == 0.0);
    CHECK(r.dissipation_rate > 0.0);
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].model_energy < rows[i - 1].model_energy);
  SUBCASE("magnetic terms add to the hydrodynamic sample") {
    const BudgetWeights bw = make_budget_weights(g, cfg.filter.theta);
    MHDState sz{states[2].w, SpectralField::zeros(g, 3), states[2].time};
    NSEConfig ncfg;
    ncfg.nu = cfg.nu1;
    ncfg.filter = cfg.filter;
    ncfg.dt = cfg.dt;
    ncfg.t_end = cfg.t_end;
    const BudgetSample coupled = mhd_budget_sample(sz, cfg, bw);
    const BudgetSample hydro =
        nse_budget_sample(FlowState{sz.w, sz.time}, ncfg, bw);
    CHECK(coupled.energy == doctest::Approx(hydro.energy).epsilon(1e-14));
    CHECK(coupled.dissipation ==
          doctest::Approx(hydro.dissipation).epsilon(1e-14));
  }
}

TEST_CASE("coupled trajectory driver completes and samples budgets") {
  TorusGrid g = make_grid(8);
  MHDConfig cfg = coupled_config(0.1, 0.1, 0.1, 1e-2, 0.1);
  auto [u, b] = orszag_tang(g, 1.0, 1.0);
  MhdRunResult res = run_mhd_trajectory(u, b, cfg, 5);
  CHECK(res.status.completed);
  CHECK(res.status.steps_taken == 10);
  CHECK(res.budget_samples.size() == 3); // steps 0, 5, 10
  CHECK(res.final_state.w.all_finite());
  CHECK(res.final_state.b.all_finite());
  CHECK(max_divergence(res.final_state.b) <=
        1e-12 * std::max(1.0, res.final_state.b.max_abs()));
}
