#include "lesbox/flows.hpp"

#include <cmath>
#include <stdexcept>

#include "lesbox/ops.hpp"
#include "lesbox/rng.hpp"

namespace lesbox {

namespace {

// Coefficients of cos(x) and sin(x) on the +1/-1 modes.
cplx cosc(int sign) {
  (void)sign;
  return cplx{0.5, 0.0};
}
cplx sinc(int sign) { return cplx{0.0, sign > 0 ? -0.5 : 0.5}; }

void require_modes(const TorusGrid& g, int maxmode) {
  if (g.dealias_kmax < maxmode)
    throw std::invalid_argument(
        "flows: grid mask does not retain the required low modes");
}

} // namespace

SpectralField taylor_green(const TorusGrid& g, double amplitude) {
  require_modes(g, 1);
  SpectralField f = SpectralField::zeros(g, 3);
  for (int e0 : {1, -1})
    for (int e1 : {1, -1})
      for (int e2 : {1, -1}) {
        const std::size_t idx = g.site_of_modes(e0, e1, e2);
        f.at(0, idx) = amplitude * cosc(e0) * sinc(e1) * sinc(e2);
        f.at(1, idx) = -amplitude * sinc(e0) * cosc(e1) * sinc(e2);
      }
  f.zero_mean = true;
  f.divergence_free = true;
  return f;
}

SpectralField shear_mode(const TorusGrid& g, double amplitude) {
  require_modes(g, 1);
  SpectralField f = SpectralField::zeros(g, 3);
  f.at(1, g.site_of_modes(1, 0, 0)) = amplitude * cosc(1);
  f.at(1, g.site_of_modes(-1, 0, 0)) = amplitude * cosc(-1);
  f.zero_mean = true;
  f.divergence_free = true;
  return f;
}

std::pair<SpectralField, SpectralField> orszag_tang(const TorusGrid& g,
                                                    double u_amp,
                                                    double b_amp) {
  require_modes(g, 2);
  SpectralField u = SpectralField::zeros(g, 3);
  SpectralField b = SpectralField::zeros(g, 3);
  for (int e : {1, -1}) {
    u.at(0, g.site_of_modes(0, e, 0)) = -u_amp * sinc(e);
    u.at(1, g.site_of_modes(e, 0, 0)) = u_amp * sinc(e);
    b.at(0, g.site_of_modes(0, e, 0)) = -b_amp * sinc(e);
    b.at(1, g.site_of_modes(2 * e, 0, 0)) = b_amp * sinc(e);
  }
  u.zero_mean = b.zero_mean = true;
  u.divergence_free = b.divergence_free = true;
  return {std::move(u), std::move(b)};
}

SpectralField random_solenoidal(const TorusGrid& g, std::uint64_t seed,
                                double spectrum_slope, double amplitude) {
  const CounterRng rng{seed};
  SpectralField f = SpectralField::zeros(g, 3);
  const std::vector<double>& ksq = g.tables->ksq;
  const std::vector<std::uint8_t>& keep = g.tables->keep;
  const std::vector<std::size_t>& reflect = g.tables->reflect;
  const int n = g.n;

  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        if (!keep[idx] || ksq[idx] == 0.0) continue;
        // One representative per conjugate pair; skip self-conjugate
        // (Nyquist-only) sites.
        const std::size_t r = reflect[idx];
        if (r <= idx) continue;
        const double sd = std::pow(1.0 + ksq[idx], 0.5 * spectrum_slope);
        for (int c = 0; c < 3; ++c) {
          const auto [re, im] = rng.normal_pair(c, idx);
          f.at(c, idx) = cplx{sd * re, sd * im};
          f.at(c, r) = std::conj(f.at(c, idx));
        }
      }

  f = leray_project(f);
  enforce_zero_mean(f);
  apply_dealias_mask(f);
  const double l2 = sobolev_norm(f, {0.0, false});
  if (l2 > 0.0) {
    const double s = amplitude / l2;
    for (cplx& c : f.coef) c *= s;
  }
  f.zero_mean = true;
  f.divergence_free = true;
  return f;
}

SpectralField abc_forcing(const TorusGrid& g, double amplitude) {
  require_modes(g, 1);
  SpectralField f = SpectralField::zeros(g, 3);
  for (int e : {1, -1}) {
    f.at(0, g.site_of_modes(0, 0, e)) += amplitude * sinc(e);
    f.at(0, g.site_of_modes(0, e, 0)) += amplitude * cosc(e);
    f.at(1, g.site_of_modes(e, 0, 0)) += amplitude * sinc(e);
    f.at(1, g.site_of_modes(0, 0, e)) += amplitude * cosc(e);
    f.at(2, g.site_of_modes(0, e, 0)) += amplitude * sinc(e);
    f.at(2, g.site_of_modes(e, 0, 0)) += amplitude * cosc(e);
  }
  f.zero_mean = true;
  f.divergence_free = true;
  return f;
}

} // namespace lesbox
