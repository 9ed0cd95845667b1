#include "lesbox/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "lesbox/fft.hpp"
#include "lesbox/ops.hpp"

namespace lesbox {

std::vector<double> shell_spectrum(const SpectralField& f) {
  const TorusGrid& g = f.grid;
  const std::vector<double>& ksq = g.tables->ksq;
  const double vol = g.period * g.period * g.period;
  double kmax = 0.0;
  for (double v : ksq) kmax = std::max(kmax, v);
  const int shells = static_cast<int>(std::ceil(std::sqrt(kmax))) + 1;
  std::vector<KahanSum<double>> acc(shells);
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<const cplx> fc = f.comp(c);
    for (std::size_t i = 0; i < total; ++i) {
      const int shell =
          static_cast<int>(std::floor(std::sqrt(ksq[i]) + 0.5));
      acc[shell].add(std::norm(fc[i]));
    }
  }
  std::vector<double> out(shells);
  for (int j = 0; j < shells; ++j) out[j] = 0.5 * vol * acc[j].value();
  return out;
}

DifferenceNorms difference_norms(const SpectralField& a,
                                 const SpectralField& b,
                                 std::span<const double> p_list) {
  if (!same_grid(a.grid, b.grid))
    throw std::invalid_argument("diagnostics: fields live on different grids");
  if (a.components != b.components)
    throw std::invalid_argument("diagnostics: component count mismatch");
  const SpectralField d = subtract(a, b);
  DifferenceNorms out;
  out.l2 = sobolev_norm(d, {0.0, false});
  if (p_list.empty()) return out;

  const std::vector<double> vals = fft::to_real(d);
  const TorusGrid& g = a.grid;
  const std::size_t total = g.site_count();
  const double cell = std::pow(g.period / g.n, 3.0);
  for (double p : p_list) {
    if (!(p >= 1.0))
      throw std::invalid_argument("diagnostics: Lp exponent must be >= 1");
    KahanSum<double> acc;
    for (std::size_t i = 0; i < total; ++i) {
      double sq = 0.0;
      for (int c = 0; c < d.components; ++c) {
        const double v = vals[static_cast<std::size_t>(c) * total + i];
        sq += v * v;
      }
      acc.add(std::pow(sq, 0.5 * p));
    }
    out.lp.emplace_back(p, std::pow(cell * acc.value(), 1.0 / p));
  }
  return out;
}

SweepResult alpha_sweep(std::span<const double> alphas,
                        const SweepSample& reference,
                        const std::function<SweepSample(double)>& run,
                        std::span<const double> p_list) {
  if (alphas.empty())
    throw std::invalid_argument("sweep: need at least one alpha");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0))
      throw std::invalid_argument("sweep: alphas must be positive");
    if (i > 0 && !(alphas[i] < alphas[i - 1]))
      throw std::invalid_argument("sweep: alphas must be strictly decreasing");
  }

  SweepResult res;
  for (double alpha : alphas) {
    SweepSample s = run(alpha);
    ConvergenceRecord rec;
    rec.alpha = alpha;
    rec.diverged = s.diverged;
    rec.wall_seconds = s.wall_seconds;
    if (!s.diverged) {
      const DifferenceNorms dv =
          difference_norms(s.velocity, reference.velocity, p_list);
      rec.velocity_error_l2 = dv.l2;
      rec.velocity_error_lp = dv.lp;
      if (s.pressure && reference.pressure) {
        rec.pressure_error_l2 =
            difference_norms(*s.pressure, *reference.pressure, {}).l2;
      }
      if (s.magnetic && reference.magnetic) {
        const DifferenceNorms dm =
            difference_norms(*s.magnetic, *reference.magnetic, p_list);
        rec.magnetic_error_l2 = dm.l2;
        rec.magnetic_error_lp = dm.lp;
      }
    }
    res.records.push_back(std::move(rec));
  }

  auto strictly_decreasing = [&](auto pick) {
    for (std::size_t i = 0; i + 1 < res.records.size(); ++i) {
      if (res.records[i].diverged || res.records[i + 1].diverged) return false;
      if (!(pick(res.records[i + 1]) < pick(res.records[i]))) return false;
    }
    return !res.records.empty() && !res.records.back().diverged;
  };
  res.velocity_strictly_decreasing = strictly_decreasing(
      [](const ConvergenceRecord& r) { return r.velocity_error_l2; });
  res.pressure_strictly_decreasing = strictly_decreasing(
      [](const ConvergenceRecord& r) { return r.pressure_error_l2; });
  res.magnetic_strictly_decreasing = strictly_decreasing(
      [](const ConvergenceRecord& r) { return r.magnetic_error_l2; });

  // log-log least squares over non-diverged records with positive error
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (const ConvergenceRecord& r : res.records) {
    if (r.diverged || r.velocity_error_l2 <= 0.0) continue;
    const double x = std::log(r.alpha);
    const double y = std::log(r.velocity_error_l2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double denom = m * sxx - sx * sx;
    if (denom != 0.0) res.velocity_slope = (m * sxy - sx * sy) / denom;
  }
  return res;
}

} // namespace lesbox
