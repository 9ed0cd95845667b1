#include "lesbox/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "lesbox/fft.hpp"

namespace lesbox {

namespace {

std::vector<double> axis_wavenumbers(const TorusGrid& g) {
  std::vector<double> k(g.n);
  for (int i = 0; i < g.n; ++i) k[i] = g.dk * g.mode_of(i);
  return k;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!same_grid(a.grid, b.grid))
    throw std::invalid_argument("ops: fields live on different grids");
}

} // namespace

double sobolev_norm(const SpectralField& f, SobolevIndex idx) {
  const std::vector<double>& ksq = f.grid.tables->ksq;
  const double vol = f.grid.period * f.grid.period * f.grid.period;
  KahanSum<double> acc;
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<const cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i) {
      double w;
      if (idx.homogeneous) {
        if (ksq[i] == 0.0) continue;
        w = (idx.s == 0.0) ? 1.0 : std::pow(ksq[i], idx.s);
      } else {
        w = (idx.s == 0.0) ? 1.0 : std::pow(1.0 + ksq[i], idx.s);
      }
      acc.add(w * std::norm(fc[i]));
    }
  }
  return std::sqrt(vol * acc.value());
}

double inner_l2(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  if (a.components != b.components)
    throw std::invalid_argument("ops: component count mismatch");
  const double vol = a.grid.period * a.grid.period * a.grid.period;
  KahanSum<double> acc;
  const std::size_t total = a.coef.size();
  for (std::size_t i = 0; i < total; ++i) {
    const cplx& x = a.coef[i];
    const cplx& y = b.coef[i];
    acc.add(x.real() * y.real() + x.imag() * y.imag());
  }
  return vol * acc.value();
}

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 0 || axis > 2)
    throw std::invalid_argument("ops: axis must be 0, 1 or 2");
  const TorusGrid& g = f.grid;
  const std::vector<double> kax = axis_wavenumbers(g);
  SpectralField out = SpectralField::zeros(g, f.components);
  out.zero_mean = true; // derivative kills the mean mode
  out.divergence_free = f.divergence_free;
  const int n = g.n;
  for (int c = 0; c < f.components; ++c) {
    std::span<const cplx> src = f.comp(c);
    std::span<cplx> dst = out.comp(c);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2, ++idx) {
          const double k = (axis == 0) ? kax[i0] : (axis == 1) ? kax[i1]
                                                               : kax[i2];
          dst[idx] = cplx{0.0, k} * src[idx];
        }
  }
  return out;
}

SpectralField divergence(const SpectralField& f) {
  if (f.components != 3 && f.components != 9)
    throw std::invalid_argument("ops: divergence needs a vector or tensor");
  const TorusGrid& g = f.grid;
  const std::vector<double> kax = axis_wavenumbers(g);
  const int out_comps = (f.components == 9) ? 3 : 1;
  SpectralField out = SpectralField::zeros(g, out_comps);
  out.zero_mean = true;
  const int n = g.n;
  for (int m = 0; m < out_comps; ++m) {
    std::span<cplx> dst = out.comp(m);
    for (int j = 0; j < 3; ++j) {
      std::span<const cplx> src =
          (f.components == 9) ? f.comp(3 * j + m) : f.comp(j);
      std::size_t idx = 0;
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
          for (int i2 = 0; i2 < n; ++i2, ++idx) {
            const double k = (j == 0) ? kax[i0] : (j == 1) ? kax[i1]
                                                           : kax[i2];
            dst[idx] += cplx{0.0, k} * src[idx];
          }
    }
  }
  return out;
}

SpectralField gradient(const SpectralField& scalar) {
  if (scalar.components != 1)
    throw std::invalid_argument("ops: gradient needs a scalar");
  const TorusGrid& g = scalar.grid;
  const std::vector<double> kax = axis_wavenumbers(g);
  SpectralField out = SpectralField::zeros(g, 3);
  out.zero_mean = true;
  const int n = g.n;
  std::span<const cplx> src = scalar.comp(0);
  for (int j = 0; j < 3; ++j) {
    std::span<cplx> dst = out.comp(j);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2, ++idx) {
          const double k = (j == 0) ? kax[i0] : (j == 1) ? kax[i1]
                                                         : kax[i2];
          dst[idx] = cplx{0.0, k} * src[idx];
        }
  }
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  if (v.components != 3)
    throw std::invalid_argument("ops: projection needs a vector field");
  const TorusGrid& g = v.grid;
  const std::vector<double> kax = axis_wavenumbers(g);
  const std::vector<double>& ksq = g.tables->ksq;
  SpectralField out = v;
  out.divergence_free = true;
  const int n = g.n;
  std::span<cplx> v0 = out.comp(0);
  std::span<cplx> v1 = out.comp(1);
  std::span<cplx> v2 = out.comp(2);
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        if (ksq[idx] == 0.0) continue;
        const double k0 = kax[i0], k1 = kax[i1], k2 = kax[i2];
        const cplx dot = k0 * v0[idx] + k1 * v1[idx] + k2 * v2[idx];
        const cplx s = dot / ksq[idx];
        v0[idx] -= k0 * s;
        v1[idx] -= k1 * s;
        v2[idx] -= k2 * s;
      }
  return out;
}

namespace {

// Lattice size on which pointwise products are exact truncated convolutions:
// aliases of retained triads (|p+q| <= 2*kmax shifted by m) must fall outside
// the mask, which needs m >= 3*kmax + 1.
int product_lattice(const TorusGrid& g) {
  const int need = 3 * g.dealias_kmax + 1;
  if (g.n >= need) return g.n;
  return (need % 2 == 0) ? need : need + 1;
}

// Mode -> padded-lattice deposits.  A Nyquist mode (only retained when the
// mask keeps everything) splits symmetrically so the lifted signal is real.
struct Deposit {
  int index;
  double weight;
};

void axis_deposits(int mode, int n, int m, bool lifting, Deposit out[2],
                   int& count) {
  if (mode == n / 2 && m > n) {
    const double w = lifting ? 0.5 : 1.0;
    out[0] = {mode, w};
    out[1] = {m - mode, w};
    count = 2;
  } else {
    out[0] = {mode >= 0 ? mode : mode + m, 1.0};
    count = 1;
  }
}

std::vector<double> lift_component(const SpectralField& f, int c, int m) {
  const TorusGrid& g = f.grid;
  const int n = g.n;
  const std::size_t mtotal = static_cast<std::size_t>(m) * m * m;
  cplx* buf = fft::buffer(m);
  std::fill(buf, buf + mtotal, cplx{0.0, 0.0});
  std::span<const cplx> src = f.comp(c);
  const std::vector<std::uint8_t>& keep = g.tables->keep;
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        if (!keep[idx] || src[idx] == cplx{0.0, 0.0}) continue;
        const int mo[3] = {g.mode_of(i0), g.mode_of(i1), g.mode_of(i2)};
        Deposit d0[2], d1[2], d2[2];
        int c0, c1, c2;
        axis_deposits(mo[0], n, m, true, d0, c0);
        axis_deposits(mo[1], n, m, true, d1, c1);
        axis_deposits(mo[2], n, m, true, d2, c2);
        for (int a = 0; a < c0; ++a)
          for (int b = 0; b < c1; ++b)
            for (int e = 0; e < c2; ++e) {
              const std::size_t p =
                  (static_cast<std::size_t>(d0[a].index) * m + d1[b].index) *
                      m +
                  d2[e].index;
              buf[p] += src[idx] * (d0[a].weight * d1[b].weight *
                                    d2[e].weight);
            }
      }
  fft::backward(m, buf);
  std::vector<double> r(mtotal);
  for (std::size_t i = 0; i < mtotal; ++i) r[i] = buf[i].real();
  return r;
}

void extract_component(SpectralField& out, int c, const cplx* padded, int m) {
  const TorusGrid& g = out.grid;
  const int n = g.n;
  std::span<cplx> dst = out.comp(c);
  const std::vector<std::uint8_t>& keep = g.tables->keep;
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        if (!keep[idx]) {
          dst[idx] = cplx{0.0, 0.0};
          continue;
        }
        const int mo[3] = {g.mode_of(i0), g.mode_of(i1), g.mode_of(i2)};
        Deposit d0[2], d1[2], d2[2];
        int c0, c1, c2;
        axis_deposits(mo[0], n, m, false, d0, c0);
        axis_deposits(mo[1], n, m, false, d1, c1);
        axis_deposits(mo[2], n, m, false, d2, c2);
        cplx v{0.0, 0.0};
        for (int a = 0; a < c0; ++a)
          for (int b = 0; b < c1; ++b)
            for (int e = 0; e < c2; ++e) {
              const std::size_t p =
                  (static_cast<std::size_t>(d0[a].index) * m + d1[b].index) *
                      m +
                  d2[e].index;
              v += padded[p];
            }
        dst[idx] = v;
      }
}

} // namespace

SpectralField dealiased_product(const SpectralField& a,
                                const SpectralField& b) {
  require_same_grid(a, b);
  const TorusGrid& g = a.grid;
  const int m = product_lattice(g);
  const std::size_t mtotal = static_cast<std::size_t>(m) * m * m;
  const bool same_operand = (a.coef.data() == b.coef.data());

  std::vector<std::vector<double>> ra(a.components);
  for (int c = 0; c < a.components; ++c) ra[c] = lift_component(a, c, m);
  std::vector<std::vector<double>> rb;
  if (!same_operand) {
    rb.resize(b.components);
    for (int c = 0; c < b.components; ++c) rb[c] = lift_component(b, c, m);
  }
  const auto& rbv = same_operand ? ra : rb;

  SpectralField out =
      SpectralField::zeros(g, a.components * b.components);
  cplx* buf = fft::buffer(m);
  for (int ca = 0; ca < a.components; ++ca)
    for (int cb = 0; cb < b.components; ++cb) {
      const int slot = ca * b.components + cb;
      if (same_operand && cb < ca) continue; // fill symmetric slots below
      const double* x = ra[ca].data();
      const double* y = rbv[cb].data();
      for (std::size_t i = 0; i < mtotal; ++i)
        buf[i] = cplx{x[i] * y[i], 0.0};
      fft::forward(m, buf);
      extract_component(out, slot, buf, m);
    }
  if (same_operand)
    for (int ca = 0; ca < a.components; ++ca)
      for (int cb = 0; cb < ca; ++cb) {
        std::span<const cplx> src = out.comp(cb * b.components + ca);
        std::span<cplx> dst = out.comp(ca * b.components + cb);
        std::copy(src.begin(), src.end(), dst.begin());
      }
  return out;
}

SpectralField transpose_tensor(const SpectralField& t) {
  if (t.components != 9)
    throw std::invalid_argument("ops: transpose needs a rank-2 tensor");
  SpectralField out = SpectralField::zeros(t.grid, 9);
  out.zero_mean = t.zero_mean;
  for (int j = 0; j < 3; ++j)
    for (int m = 0; m < 3; ++m) {
      std::span<const cplx> src = t.comp(3 * j + m);
      std::span<cplx> dst = out.comp(3 * m + j);
      std::copy(src.begin(), src.end(), dst.begin());
    }
  return out;
}

void apply_dealias_mask(SpectralField& f) {
  const std::vector<std::uint8_t>& keep = f.grid.tables->keep;
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i)
      if (!keep[i]) fc[i] = cplx{0.0, 0.0};
  }
}

void enforce_zero_mean(SpectralField& f) {
  for (int c = 0; c < f.components; ++c) f.comp(c)[0] = cplx{0.0, 0.0};
  f.zero_mean = true;
}

void symmetrize(SpectralField& f) {
  const std::vector<std::size_t>& reflect = f.grid.tables->reflect;
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t r = reflect[i];
      if (r < i) continue;
      if (r == i) {
        fc[i] = cplx{fc[i].real(), 0.0};
      } else {
        const cplx avg = 0.5 * (fc[i] + std::conj(fc[r]));
        fc[i] = avg;
        fc[r] = std::conj(avg);
      }
    }
  }
}

double max_conjugate_asymmetry(const SpectralField& f) {
  const std::vector<std::size_t>& reflect = f.grid.tables->reflect;
  const std::size_t total = f.site_count();
  double worst = 0.0;
  for (int c = 0; c < f.components; ++c) {
    std::span<const cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i) {
      const double d = std::abs(fc[i] - std::conj(fc[reflect[i]]));
      if (d > worst) worst = d;
    }
  }
  return worst;
}

double max_divergence(const SpectralField& v) {
  if (v.components != 3)
    throw std::invalid_argument("ops: divergence residual needs a vector");
  const TorusGrid& g = v.grid;
  const std::vector<double> kax = axis_wavenumbers(g);
  const int n = g.n;
  std::span<const cplx> v0 = v.comp(0);
  std::span<const cplx> v1 = v.comp(1);
  std::span<const cplx> v2 = v.comp(2);
  double worst = 0.0;
  std::size_t idx = 0;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2, ++idx) {
        const cplx dot =
            kax[i0] * v0[idx] + kax[i1] * v1[idx] + kax[i2] * v2[idx];
        const double d = std::abs(dot);
        if (d > worst) worst = d;
      }
  return worst;
}

SpectralField add(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  if (a.components != b.components)
    throw std::invalid_argument("ops: component count mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] += b.coef[i];
  out.zero_mean = a.zero_mean && b.zero_mean;
  out.divergence_free = a.divergence_free && b.divergence_free;
  return out;
}

SpectralField subtract(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  if (a.components != b.components)
    throw std::invalid_argument("ops: component count mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coef.size(); ++i) out.coef[i] -= b.coef[i];
  out.zero_mean = a.zero_mean && b.zero_mean;
  out.divergence_free = a.divergence_free && b.divergence_free;
  return out;
}

SpectralField scale(const SpectralField& a, double factor) {
  SpectralField out = a;
  for (cplx& c : out.coef) c *= factor;
  return out;
}

} // namespace lesbox
