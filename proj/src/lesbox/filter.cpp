#include "lesbox/filter.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lesbox/ops.hpp"

namespace lesbox {

void validate_filter(const FilterParams& p) {
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
    throw std::invalid_argument("filter: alpha must be >= 0");
  if (!(p.theta > 0.0) || p.theta > 1.0)
    throw std::invalid_argument("filter: theta must lie in (0, 1]");
}

double filter_multiplier(double ksq, const FilterParams& p) {
  // (alpha^2 ksq)^theta in one pow keeps alpha = 0 and k = 0 exact.
  return 1.0 / (1.0 + std::pow(p.alpha * p.alpha * ksq, p.theta));
}

namespace {

SpectralField apply_symbol(const SpectralField& f, const FilterParams& p,
                           bool inverse) {
  validate_filter(p);
  SpectralField out = f;
  const std::vector<double>& ksq = f.grid.tables->ksq;
  const std::size_t total = f.site_count();
  for (int c = 0; c < f.components; ++c) {
    std::span<cplx> fc = out.comp(c);
    for (std::size_t i = 0; i < total; ++i) {
      // Forward multiplies by filter_multiplier exactly; inverse by the
      // reciprocal shift, so a round trip costs two rounding steps.
      if (inverse)
        fc[i] *= 1.0 + std::pow(p.alpha * p.alpha * ksq[i], p.theta);
      else
        fc[i] *= filter_multiplier(ksq[i], p);
    }
  }
  return out;
}

} // namespace

SpectralField apply_filter(const SpectralField& f, const FilterParams& p) {
  return apply_symbol(f, p, false);
}

SpectralField inverse_shift(const SpectralField& f, const FilterParams& p) {
  return apply_symbol(f, p, true);
}

DeviationBound filter_deviation_bound(const SpectralField& f, double s,
                                      const FilterParams& p,
                                      bool homogeneous) {
  validate_filter(p);
  if (p.alpha == 0.0)
    throw std::invalid_argument(
        "filter: deviation bound needs alpha > 0 (alpha = 0 is the identity)");
  const SpectralField filtered = apply_filter(f, p);
  const SpectralField dev = subtract(filtered, f);
  DeviationBound b;
  b.lhs = sobolev_norm(dev, {s, homogeneous});
  b.rhs = std::pow(p.alpha, 2.0 * p.theta) *
          sobolev_norm(filtered, {s + 2.0 * p.theta, homogeneous});
  return b;
}

LemmaScanReport verify_lemma_bounds(const TorusGrid& g, const FilterParams& p,
                                    double beta) {
  validate_filter(p);
  if (p.alpha <= 0.0)
    throw std::invalid_argument("filter: lemma scan needs alpha > 0");
  if (beta < 0.0 || beta > 2.0 * p.theta + 1e-15)
    throw std::invalid_argument("filter: beta must lie in [0, 2 theta]");

  LemmaScanReport r;
  r.theta = p.theta;
  r.alpha = p.alpha;
  r.beta = beta;
  r.grid_n = g.n;

  const std::vector<double>& ksq = g.tables->ksq;
  const std::vector<std::uint8_t>& keep = g.tables->keep;
  const std::size_t total = g.site_count();
  const double albeta = std::pow(p.alpha, beta);
  for (std::size_t i = 0; i < total; ++i) {
    if (!keep[i]) continue;
    const double m = filter_multiplier(ksq[i], p);
    const double weighted =
        albeta * ((beta == 0.0) ? m : std::pow(ksq[i], 0.5 * beta) * m);
    if (weighted > r.max_weighted_ratio) {
      r.max_weighted_ratio = weighted;
      int mo[3];
      g.modes_at(i, mo);
      r.argmax_weighted = {mo[0], mo[1], mo[2]};
    }
    if (m > r.max_symbol) {
      r.max_symbol = m;
      int mo[3];
      g.modes_at(i, mo);
      r.argmax_symbol = {mo[0], mo[1], mo[2]};
    }
  }
  r.pass = r.max_weighted_ratio <= 1.0 + r.tolerance &&
           r.max_symbol <= 1.0 + r.tolerance;
  return r;
}

std::string LemmaScanReport::to_json() const {
  char buf[512];
  std::snprintf(
      buf, sizeof buf,
      "{\"theta\":%.17g,\"alpha\":%.17g,\"beta\":%.17g,\"grid_n\":%d,"
      "\"max_weighted_ratio\":%.17g,\"argmax_weighted\":[%d,%d,%d],"
      "\"max_symbol\":%.17g,\"argmax_symbol\":[%d,%d,%d],"
      "\"tolerance\":%.3g,\"pass\":%s}",
      theta, alpha, beta, grid_n, max_weighted_ratio, argmax_weighted[0],
      argmax_weighted[1], argmax_weighted[2], max_symbol, argmax_symbol[0],
      argmax_symbol[1], argmax_symbol[2], tolerance, pass ? "true" : "false");
  return buf;
}

} // namespace lesbox
