#include "lesbox/ifrk4.hpp"

#include <cmath>

namespace lesbox::ifrk4 {

Table viscous_table(const TorusGrid& g, double nu, double tau) {
  const std::vector<double>& ksq = g.tables->ksq;
  Table e(ksq.size());
  for (std::size_t i = 0; i < ksq.size(); ++i)
    e[i] = std::exp(-nu * ksq[i] * tau);
  return e;
}

SpectralField stage_a(const SpectralField& u, const SpectralField& k1,
                      const Table& e2, double h2) {
  SpectralField out = SpectralField::zeros(u.grid, u.components);
  const std::size_t total = u.site_count();
  for (int c = 0; c < u.components; ++c) {
    std::span<const cplx> uu = u.comp(c);
    std::span<const cplx> kk = k1.comp(c);
    std::span<cplx> oo = out.comp(c);
    for (std::size_t i = 0; i < total; ++i)
      oo[i] = e2[i] * (uu[i] + h2 * kk[i]);
  }
  return out;
}

SpectralField stage_b(const SpectralField& u, const SpectralField& k2,
                      const Table& e2, double h2) {
  SpectralField out = SpectralField::zeros(u.grid, u.components);
  const std::size_t total = u.site_count();
  for (int c = 0; c < u.components; ++c) {
    std::span<const cplx> uu = u.comp(c);
    std::span<const cplx> kk = k2.comp(c);
    std::span<cplx> oo = out.comp(c);
    for (std::size_t i = 0; i < total; ++i)
      oo[i] = e2[i] * uu[i] + h2 * kk[i];
  }
  return out;
}

SpectralField stage_c(const SpectralField& u, const SpectralField& k3,
                      const Table& e1, const Table& e2, double h) {
  SpectralField out = SpectralField::zeros(u.grid, u.components);
  const std::size_t total = u.site_count();
  for (int c = 0; c < u.components; ++c) {
    std::span<const cplx> uu = u.comp(c);
    std::span<const cplx> kk = k3.comp(c);
    std::span<cplx> oo = out.comp(c);
    for (std::size_t i = 0; i < total; ++i)
      oo[i] = e1[i] * uu[i] + h * (e2[i] * kk[i]);
  }
  return out;
}

SpectralField combine(const SpectralField& u, const SpectralField& k1,
                      const SpectralField& k2, const SpectralField& k3,
                      const SpectralField& k4, const Table& e1,
                      const Table& e2, double h) {
  SpectralField out = SpectralField::zeros(u.grid, u.components);
  const double h6 = h / 6.0;
  const std::size_t total = u.site_count();
  for (int c = 0; c < u.components; ++c) {
    std::span<const cplx> uu = u.comp(c);
    std::span<const cplx> a = k1.comp(c);
    std::span<const cplx> b = k2.comp(c);
    std::span<const cplx> d = k3.comp(c);
    std::span<const cplx> e = k4.comp(c);
    std::span<cplx> oo = out.comp(c);
    for (std::size_t i = 0; i < total; ++i)
      oo[i] = e1[i] * uu[i] +
              h6 * (e1[i] * a[i] + 2.0 * (e2[i] * (b[i] + d[i])) + e[i]);
  }
  return out;
}

} // namespace lesbox::ifrk4
