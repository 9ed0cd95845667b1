#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "lesbox/filter.hpp"
#include "lesbox/flows.hpp"
#include "lesbox/grid.hpp"
#include "lesbox/ops.hpp"
#include "test_util.hpp"

using namespace lesbox;
using testutil::identical;
using testutil::random_symmetric;
using testutil::rel_max_diff;

TEST_CASE("smoothing symbol closed forms") {
  CHECK(filter_multiplier(0.0, {1.0, 0.5}) == 1.0);
  CHECK(filter_multiplier(7.0, {0.0, theta_critical}) == 1.0); // identity
  CHECK(filter_multiplier(4.0, {1.0, theta_classical}) ==
        doctest::Approx(0.2).epsilon(1e-15));
  CHECK(filter_multiplier(1.0, {1.0, theta_critical}) ==
        doctest::Approx(0.5).epsilon(1e-15));
  // (alpha^2 ksq)^theta = (4)^(1/6) = 2^(1/3).
  CHECK(filter_multiplier(1.0, {2.0, theta_critical}) ==
        doctest::Approx(1.0 / (1.0 + std::cbrt(2.0))).epsilon(1e-15));
  CHECK(filter_multiplier(1e8, {1.0, theta_critical}) < 0.05);
}

TEST_CASE("symbol is bounded, monotone in |k|, and parameter validation holds") {
  const FilterParams p{0.7, theta_critical};
  double prev = 2.0;
  for (double ksq : {0.0, 0.3, 1.0, 4.0, 25.0, 1e4}) {
    const double m = filter_multiplier(ksq, p);
    CHECK(m <= 1.0);
    CHECK(m > 0.0);
    CHECK(m <= prev);
    prev = m;
  }
  CHECK_THROWS_AS(validate_filter({-1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate_filter({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate_filter({1.0, 1.5}), std::invalid_argument);
  CHECK_NOTHROW(validate_filter({0.0, 1.0}));
}

TEST_CASE("apply_filter multiplies each coefficient by the symbol exactly") {
  TorusGrid g = make_grid(8);
  SpectralField f = random_symmetric(g, 101, 3);
  const FilterParams p{0.3, theta_critical};
  SpectralField filtered = apply_filter(f, p);
  for (int c = 0; c < 3; ++c)
    for (std::size_t idx = 0; idx < g.site_count(); ++idx) {
      const cplx want = filter_multiplier(g.tables->ksq[idx], p) * f.at(c, idx);
      CHECK(filtered.at(c, idx) == want); // bitwise: same single multiply
    }
  SUBCASE("alpha = 0 is the identity, bit for bit") {
    SpectralField id = apply_filter(f, {0.0, theta_critical});
    CHECK(identical(id, f));
  }
  SUBCASE("mean mode is never damped") {
    SpectralField raw = SpectralField::zeros(g, 1);
    raw.at(0, g.site_of_modes(0, 0, 0)) = cplx{2.5, 0.0};
    SpectralField out = apply_filter(raw, {10.0, 1.0});
    CHECK(out.at(0, g.site_of_modes(0, 0, 0)) == cplx{2.5, 0.0});
  }
}

TEST_CASE("inverse shift undoes the filter per mode") {
  TorusGrid g = make_grid(8);
  SpectralField f = random_symmetric(g, 102, 3);
  for (double theta : {theta_critical, 0.5, theta_classical}) {
    const FilterParams p{0.4, theta};
    CHECK(rel_max_diff(inverse_shift(apply_filter(f, p), p), f) <= 1e-14);
    CHECK(rel_max_diff(apply_filter(inverse_shift(f, p), p), f) <= 1e-14);
  }
}

TEST_CASE("filter is self-adjoint and non-expansive in every Sobolev norm") {
  TorusGrid g = make_grid(8);
  SpectralField a = random_symmetric(g, 103, 3);
  SpectralField b = random_symmetric(g, 104, 3);
  const FilterParams p{0.25, theta_critical};
  CHECK(inner_l2(apply_filter(a, p), b) ==
        doctest::Approx(inner_l2(a, apply_filter(b, p))).epsilon(1e-12));
  for (double s : {0.0, theta_critical, 1.0, 1.0 + theta_critical}) {
    CHECK(sobolev_norm(apply_filter(a, p), {s, false}) <=
          sobolev_norm(a, {s, false}) * (1.0 + 1e-15));
    CHECK(sobolev_norm(apply_filter(a, p), {s, true}) <=
          sobolev_norm(a, {s, true}) * (1.0 + 1e-15));
  }
}

TEST_CASE("filter commutes with spectral derivatives") {
  TorusGrid g = make_grid(8);
  SpectralField f = random_symmetric(g, 105, 1);
  const FilterParams p{0.5, theta_critical};
  for (int axis = 0; axis < 3; ++axis) {
    SpectralField fd = apply_filter(derivative(f, axis), p);
    SpectralField df = derivative(apply_filter(f, p), axis);
    CHECK(rel_max_diff(fd, df) <= 1e-15);
  }
}

TEST_CASE("deviation bound: exact identity in homogeneous norms") {
  TorusGrid g = make_grid(8);
  SpectralField f = random_symmetric(g, 106, 3);
  for (double theta : {theta_critical, theta_classical})
    for (double alpha : {1.0, 0.2, 0.01})
      for (double s : {0.0, 0.5, 1.0}) {
        const DeviationBound d =
            filter_deviation_bound(f, s, {alpha, theta}, true);
        CHECK(d.lhs == doctest::Approx(d.rhs).epsilon(1e-13));
        // Full weights keep the one-sided bound.
        const DeviationBound full =
            filter_deviation_bound(f, s, {alpha, theta}, false);
        CHECK(full.lhs <= full.rhs * (1.0 + 1e-13));
      }
  CHECK_THROWS_AS(filter_deviation_bound(f, 0.0, {0.0, theta_critical}, true),
                  std::invalid_argument);
}

TEST_CASE("deviation bound: pinned single-pair values") {
  // Unit-norm pair at |k| = 1 with alpha = 1, theta = 1/6: the symbol is 1/2,
  // so the deviation has L2 norm 1/2.  The homogeneous right side is also 1/2;
  // the full-weight right side gains (1 + 1)^(1/6) = 2^(1/6).
  TorusGrid g = make_grid(8);
  const double vol = std::pow(g.period, 3.0);
  SpectralField f = SpectralField::zeros(g, 1);
  const double v = 1.0 / std::sqrt(2.0 * vol);
  f.at(0, g.site_of_modes(0, 1, 0)) = cplx{v, 0.0};
  f.at(0, g.site_of_modes(0, -1, 0)) = cplx{v, 0.0};
  const FilterParams p{1.0, theta_critical};
  const DeviationBound hom = filter_deviation_bound(f, 0.0, p, true);
  CHECK(hom.lhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hom.rhs == doctest::Approx(0.5).epsilon(1e-12));
  const DeviationBound full = filter_deviation_bound(f, 0.0, p, false);
  CHECK(full.lhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(full.rhs ==
        doctest::Approx(0.5 * std::pow(2.0, 1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("deviation shrinks at the expected rate as alpha -> 0") {
  // With theta = 1 the deviation norm scales like alpha^2 once
  // alpha^2 |k|^2 << 1; fit the log-log slope over a dyadic alpha ladder.
  TorusGrid g = make_grid(8);
  SpectralField f = random_symmetric(g, 107, 3);
  const double alphas[3] = {0.05, 0.025, 0.0125};
  double lhs[3];
  for (int i = 0; i < 3; ++i)
    lhs[i] = filter_deviation_bound(f, 0.0, {alphas[i], theta_classical}, true)
                 .lhs;
  CHECK(lhs[0] > lhs[1]);
  CHECK(lhs[1] > lhs[2]);
  const double slope1 = std::log(lhs[0] / lhs[1]) / std::log(2.0);
  const double slope2 = std::log(lhs[1] / lhs[2]) / std::log(2.0);
  CHECK(slope1 == doctest::Approx(2.0).epsilon(0.025));
  CHECK(slope2 == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("pointwise symbol scan over a full grid") {
  TorusGrid g = make_grid(16);
  SUBCASE("bounds hold for both presets across alpha") {
    for (double theta : {theta_critical, theta_classical})
      for (double alpha : {1.0, 0.1, 0.01})
        for (double beta : {0.0, theta, 2.0 * theta}) {
          const LemmaScanReport r =
              verify_lemma_bounds(g, {alpha, theta}, beta);
          CHECK(r.pass);
          CHECK(r.max_weighted_ratio <= 1.0 + r.tolerance);
          CHECK(r.max_symbol <= 1.0 + r.tolerance);
          CHECK(r.max_symbol > 0.0);
          for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(r.argmax_weighted[j]) <= g.dealias_kmax);
            CHECK(std::abs(r.argmax_symbol[j]) <= g.dealias_kmax);
          }
        }
  }
  SUBCASE("the endpoint weight saturates toward 1 at large alpha") {
    const double th = theta_critical;
    const LemmaScanReport r = verify_lemma_bounds(g, {100.0, th}, 2.0 * th);
    CHECK(r.pass);
    CHECK(r.max_weighted_ratio > 0.9); // s/(1+s) with s >> 1
  }
  SUBCASE("exponents outside [0, 2 theta] are rejected") {
    CHECK_THROWS_AS(verify_lemma_bounds(g, {1.0, theta_critical}, -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma_bounds(g, {1.0, theta_critical}, 0.4),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_lemma_bounds(g, {0.0, theta_critical}, 0.0),
                    std::invalid_argument);
  }
  SUBCASE("report serializes to parseable JSON") {
    const LemmaScanReport r =
        verify_lemma_bounds(g, {0.5, theta_critical}, theta_critical);
    const nlohmann::json j = nlohmann::json::parse(r.to_json());
    CHECK(j["theta"].get<double>() == doctest::Approx(theta_critical));
    CHECK(j["alpha"].get<double>() == 0.5);
    CHECK(j["grid_n"].get<int>() == 16);
    CHECK(j["pass"].get<bool>());
    CHECK(j["argmax_weighted"].size() == 3);
  }
}
