#include "lesbox/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lesbox {

TorusGrid make_grid(int n, double period, double dealias_fraction) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("grid: n must be even and >= 4");
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("grid: period must be positive");
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
    throw std::invalid_argument("grid: dealias_fraction must lie in (0, 1]");

  TorusGrid g;
  g.n = n;
  g.period = period;
  g.dealias_fraction = dealias_fraction;
  g.dk = two_pi / period;
  // Small epsilon so fractions like 2/3 hit the intended integer exactly
  // ((2.0/3.0)*3 rounds to 1.9999999999999998).
  g.dealias_kmax =
      static_cast<int>(std::floor(dealias_fraction * (n / 2) + 1e-9));

  auto t = std::make_shared<GridTables>();
  t->mode.resize(n);
  for (int i = 0; i < n; ++i)
    t->mode[i] = (i <= n / 2) ? i : i - n;

  const std::size_t total = g.site_count();
  t->ksq.resize(total);
  t->keep.resize(total);
  t->reflect.resize(total);
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0) {
    const int m0 = t->mode[i0];
    const int r0 = (n - i0) % n;
    for (int i1 = 0; i1 < n; ++i1) {
      const int m1 = t->mode[i1];
      const int r1 = (n - i1) % n;
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        const int m2 = t->mode[i2];
        const int r2 = (n - i2) % n;
        t->ksq[idx] = g.dk * g.dk *
                      (static_cast<double>(m0) * m0 +
                       static_cast<double>(m1) * m1 +
                       static_cast<double>(m2) * m2);
        t->keep[idx] = (std::abs(m0) <= g.dealias_kmax &&
                        std::abs(m1) <= g.dealias_kmax &&
                        std::abs(m2) <= g.dealias_kmax)
                           ? 1
                           : 0;
        t->reflect[idx] = g.site(r0, r1, r2);
      }
    }
  }
  g.tables = std::move(t);
  return g;
}

bool same_grid(const TorusGrid& a, const TorusGrid& b) {
  return a.n == b.n && a.period == b.period &&
         a.dealias_fraction == b.dealias_fraction;
}

} // namespace lesbox
