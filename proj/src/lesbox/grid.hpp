#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace lesbox {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Shared per-grid lookup tables.  Immutable after construction, so grids can
// be copied freely across threads.
struct GridTables {
  std::vector<int> mode;            // storage index -> signed mode number
  std::vector<double> ksq;          // |k|^2 per site
  std::vector<std::uint8_t> keep;   // 1 where the dealias mask retains the mode
  std::vector<std::size_t> reflect; // site of the conjugate partner -k
};

// Uniform periodic lattice on [0, period)^3 with n modes per axis.
// Mode numbers run over [-n/2+1, n/2]; k = (2*pi/period) * mode.
struct TorusGrid {
  int n = 0;
  double period = two_pi;
  double dealias_fraction = 2.0 / 3.0;
  int dealias_kmax = 0; // keep |mode_i| <= dealias_kmax on every axis
  double dk = 1.0;
  std::shared_ptr<const GridTables> tables;

  std::size_t site_count() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t site(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n + i1) * n + i2;
  }
  int mode_of(int i) const { return tables->mode[i]; }
  // Storage index for a signed mode number.
  int index_of(int mode) const { return mode >= 0 ? mode : mode + n; }
  std::size_t site_of_modes(int m0, int m1, int m2) const {
    return site(index_of(m0), index_of(m1), index_of(m2));
  }
  void modes_at(std::size_t idx, int m[3]) const {
    const int i2 = static_cast<int>(idx % n);
    const int i1 = static_cast<int>((idx / n) % n);
    const int i0 = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
    m[0] = tables->mode[i0];
    m[1] = tables->mode[i1];
    m[2] = tables->mode[i2];
  }
};

TorusGrid make_grid(int n, double period = two_pi,
                    double dealias_fraction = 2.0 / 3.0);

bool same_grid(const TorusGrid& a, const TorusGrid& b);

} // namespace lesbox
