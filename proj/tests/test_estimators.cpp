#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "divkit/closed_form.hpp"
#include "divkit/estimators.hpp"
#include "divkit/generators.hpp"
#include "divkit/radial.hpp"
#include "test_util.hpp"

using namespace divkit;
using namespace divkit::testing;

namespace {

LocationScaleParam normal_at(double delta_sq, int d, Rng& rng, bool random_sigma) {
  const SpdMatrix sigma =
      random_sigma ? random_spd(rng, d) : SpdMatrix::identity(d);
  // Direction scaled so the Mahalanobis separation is exactly delta_sq.
  Vector dir = random_vector(rng, d);
  const double cur = mahalanobis_sq(Vector(Vector::Zero(d)), dir, sigma);
  dir *= std::sqrt(delta_sq / cur);
  return LocationScaleParam(dir, sigma);
}

bool within_sigmas(const DivergenceEstimate& est, double target, double k) {
  return std::abs(est.value - target) <= k * est.std_error;
}

}  // namespace

TEST_CASE("identical parameters give an exact zero") {
  Rng rng(1);
  const LocationScaleParam p(random_vector(rng, 2), random_spd(rng, 2));
  for (const char* name : {"kl", "js", "tv", "h2"}) {
    const DivergenceEstimate est = mc_estimate(
        parse_generator(name), RadialDensity::normal(2), p, p, 1000, 5);
    CHECK(est.value == 0.0);
    CHECK(est.std_error == 0.0);
  }
}

TEST_CASE("location KL matches the closed form") {
  Rng rng(2);
  const RadialDensity rd = RadialDensity::normal(3);
  const LocationScaleParam p1 = LocationScaleParam::standard(3);
  Rng dir_rng(3);
  const SpdMatrix sigma = SpdMatrix::identity(3);
  Vector mu2(3);
  mu2 << std::sqrt(2.0), 0.0, 0.0;
  const DivergenceEstimate est =
      mc_estimate(builtin_generator("kl"), rd, p1,
                  LocationScaleParam(mu2, sigma), 1000000, 42);
  CHECK(est.std_error > 0.0);
  CHECK(within_sigmas(est, 1.0, 3.0));
}

TEST_CASE("cauchy chi-squared in three dimensions matches the polynomial") {
  const RadialDensity rd = RadialDensity::cauchy(3);
  Vector mu2(3);
  mu2 << std::sqrt(2.0), 0.0, 0.0;
  const DivergenceEstimate est = mc_estimate(
      builtin_generator("pearson_chi2"), rd, LocationScaleParam::standard(3),
      LocationScaleParam(mu2, SpdMatrix::identity(3)), 1000000, 7);
  CHECK(within_sigmas(est, hf_cauchy("chi2:pearson", 2.0, 3), 3.0));
}

TEST_CASE("estimates are bit-reproducible across runs and thread counts") {
  Rng rng(4);
  const RadialDensity rd = RadialDensity::student(2.0, 2);
  const LocationScaleParam p1(random_vector(rng, 2), random_spd(rng, 2));
  const LocationScaleParam p2(random_vector(rng, 2), random_spd(rng, 2));
  const FGenerator gen = builtin_generator("squared_hellinger");
  const DivergenceEstimate a = mc_estimate(gen, rd, p1, p2, 300000, 11, 1);
  const DivergenceEstimate b = mc_estimate(gen, rd, p1, p2, 300000, 11, 4);
  const DivergenceEstimate c = mc_estimate(gen, rd, p1, p2, 300000, 11, 1);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.value == c.value);
  const DivergenceEstimate d = mc_estimate(gen, rd, p1, p2, 300000, 12, 1);
  CHECK(a.value != d.value);
}

TEST_CASE("reduce_location") {
  SUBCASE("equal locations collapse to zero separation") {
    const LocationScaleParam p = LocationScaleParam::standard(4);
    const ReducedPair red = reduce_location(p, p);
    CHECK(red.delta_sq == 0.0);
    CHECK(red.p2.location()[0] == 0.0);
  }
  SUBCASE("euclidean case") {
    Vector mu2 = Vector::Ones(5);
    const ReducedPair red =
        reduce_location(LocationScaleParam::standard(5),
                        LocationScaleParam(mu2, SpdMatrix::identity(5)));
    CHECK(red.delta_sq == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(red.p2.location()[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(red.p1.location()[0] == 0.0);
  }
  SUBCASE("rejects unequal scales") {
    Rng rng(6);
    CHECK_THROWS_AS(
        reduce_location(LocationScaleParam(Vector::Zero(2), random_spd(rng, 2)),
                        LocationScaleParam(Vector::Zero(2), random_spd(rng, 2))),
        std::invalid_argument);
  }
  SUBCASE("full and reduced estimates agree") {
    Rng rng(7);
    const SpdMatrix sigma = random_spd(rng, 3);
    const LocationScaleParam p1(random_vector(rng, 3), sigma);
    const LocationScaleParam p2(random_vector(rng, 3), sigma);
    const ReducedPair red = reduce_location(p1, p2);
    const RadialDensity rd3 = RadialDensity::normal(3);
    const RadialDensity rd1 = RadialDensity::normal(1);
    for (const char* name : {"kl", "js", "tv"}) {
      CAPTURE(name);
      const FGenerator gen = parse_generator(name);
      const DivergenceEstimate full = mc_estimate(gen, rd3, p1, p2, 400000, 21);
      const DivergenceEstimate reduced =
          mc_estimate(gen, rd1, red.p1, red.p2, 400000, 22);
      const double band =
          3.0 * std::sqrt(full.std_error * full.std_error +
                          reduced.std_error * reduced.std_error);
      CHECK(std::abs(full.value - reduced.value) <= band);
      // The deterministic route pins the same value.
      const DivergenceEstimate quad =
          quad_fdiv_1d(gen, density_1d(rd1, 0.0, 1.0),
                       density_1d(rd1, red.p2.location()[0], 1.0));
      CHECK(std::abs(full.value - quad.value) <= 3.0 * full.std_error);
    }
  }
}

TEST_CASE("quadrature oracle basics") {
  const RadialDensity rd = RadialDensity::normal(1);
  const Density1d p = density_1d(rd, 0.0, 1.0);
  SUBCASE("identical densities integrate to zero") {
    for (const char* name : {"kl", "js", "tv"}) {
      CHECK(std::abs(quad_fdiv_1d(parse_generator(name), p, p).value) <= 1e-12);
    }
  }
  SUBCASE("frozen values") {
    const Density1d q1 = density_1d(rd, 1.0, 1.0);
    CHECK(quad_fdiv_1d(builtin_generator("kl"), p, q1).value ==
          doctest::Approx(0.5).epsilon(1e-8));
    const Density1d q2 = density_1d(rd, 2.0, 1.0);
    CHECK(quad_fdiv_1d(builtin_generator("total_variation"), p, q2).value ==
          doctest::Approx(0.68268949213708585).epsilon(1e-8));
  }
  SUBCASE("deterministic metadata") {
    const DivergenceEstimate est =
        quad_fdiv_1d(builtin_generator("kl"), p, density_1d(rd, 1.0, 1.0));
    CHECK(est.std_error == 0.0);
    CHECK(est.method == Method::quad_1d);
  }
}

TEST_CASE("affine invariance of the estimator") {
  Rng rng(8);
  const int d = 3;
  const std::vector<RadialDensity> fams = {RadialDensity::normal(d),
                                           RadialDensity::cauchy(d),
                                           RadialDensity::student(2.0, d)};
  for (const RadialDensity& rd : fams) {
    for (const char* name : {"kl", "h2", "js"}) {
      CAPTURE(rd.family_name());
      CAPTURE(name);
      const FGenerator gen = parse_generator(name);
      const LocationScaleParam p1(random_vector(rng, d), random_spd(rng, d));
      const LocationScaleParam p2(random_vector(rng, d), random_spd(rng, d));
      const AffineElement g(random_vector(rng, d), random_matrix(rng, d));
      const DivergenceEstimate base = mc_estimate(gen, rd, p1, p2, 200000, 33);
      const DivergenceEstimate moved = mc_estimate(
          gen, rd, affine_apply(g, p1), affine_apply(g, p2), 200000, 33);
      const double band =
          3.0 * std::sqrt(base.std_error * base.std_error +
                          moved.std_error * moved.std_error);
      CHECK(std::abs(base.value - moved.value) <= band);
    }
  }
}

TEST_CASE("canonicalization leaves the estimate unchanged") {
  Rng rng(9);
  const int d = 3;
  const RadialDensity rd = RadialDensity::normal(d);
  const LocationScaleParam p1(random_vector(rng, d), random_spd(rng, d));
  const LocationScaleParam p2(random_vector(rng, d), random_spd(rng, d));
  const auto [c1, c2] = canonicalize_pair(p1, p2);
  const FGenerator gen = builtin_generator("squared_hellinger");
  const DivergenceEstimate base = mc_estimate(gen, rd, p1, p2, 300000, 44);
  const DivergenceEstimate canon = mc_estimate(gen, rd, c1, c2, 300000, 44);
  const double band = 3.0 * std::sqrt(base.std_error * base.std_error +
                                      canon.std_error * canon.std_error);
  CHECK(std::abs(base.value - canon.value) <= band);
}

TEST_CASE("estimates respect the separation ordering") {
  const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0, 8.0};
  const RadialDensity rd1 = RadialDensity::normal(1);
  for (const char* name : {"kl", "js", "tv"}) {
    CAPTURE(name);
    const FGenerator gen = parse_generator(name);
    double prev_quad = -1.0;
    double prev_mc = -1.0;
    double prev_mc_band = 0.0;
    for (double u : grid) {
      const double delta = std::sqrt(u);
      const double quad =
          quad_fdiv_1d(gen, density_1d(rd1, 0.0, 1.0), density_1d(rd1, delta, 1.0))
              .value;
      CHECK(quad > prev_quad);
      prev_quad = quad;

      Vector mu2(1);
      mu2 << delta;
      const DivergenceEstimate mc = mc_estimate(
          gen, rd1, LocationScaleParam::standard(1),
          LocationScaleParam(mu2, SpdMatrix::identity(1)), 100000, 55);
      CHECK(mc.value >= prev_mc - 3.0 * (mc.std_error + prev_mc_band));
      prev_mc = mc.value;
      prev_mc_band = mc.std_error;
    }
  }
}

TEST_CASE("bound checks for the bounded divergences") {
  const RadialDensity rd1 = RadialDensity::normal(1);
  for (double u : {1.0, 4.0, 16.0, 36.0}) {
    Vector mu2(1);
    mu2 << std::sqrt(u);
    const LocationScaleParam a = LocationScaleParam::standard(1);
    const LocationScaleParam b(mu2, SpdMatrix::identity(1));
    const DivergenceEstimate tv =
        mc_estimate(builtin_generator("total_variation"), rd1, a, b, 100000, 66);
    CHECK(tv.value <= 1.0 + 3.0 * tv.std_error);
    const DivergenceEstimate js =
        mc_estimate(builtin_generator("jensen_shannon"), rd1, a, b, 100000, 66);
    // The catalog js generator carries twice the half-sum-of-KLs value, so
    // its sharp bound is 2 log 2.
    CHECK(js.value <= kJsGeneratorScale * std::log(2.0) + 3.0 * js.std_error);
  }
}

TEST_CASE("divergent integrands are reported, not averaged over") {
  // Neyman chi-squared against a far tighter scale blows up the ratio
  // moments; the accumulator detects the overflow.
  Matrix tight(1, 1);
  tight << 1e-9;
  const RadialDensity rd = RadialDensity::normal(1);
  CHECK_THROWS_AS(
      mc_estimate(builtin_generator("neyman_chi2"), rd,
                  LocationScaleParam::standard(1),
                  LocationScaleParam(Vector::Zero(1), SpdMatrix(tight)), 10000, 3),
      std::runtime_error);
}

TEST_CASE("ratio underflow is clamped and counted") {
  Vector far(1);
  far << 50.0;
  const RadialDensity rd = RadialDensity::normal(1);
  const DivergenceEstimate est = mc_estimate(
      builtin_generator("total_variation"), rd, LocationScaleParam::standard(1),
      LocationScaleParam(far, SpdMatrix::identity(1)), 200, 5);
  CHECK(est.n_clamped == 200);
  CHECK(est.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("argument validation") {
  const RadialDensity rd = RadialDensity::normal(2);
  const LocationScaleParam p = LocationScaleParam::standard(2);
  CHECK_THROWS_AS(mc_estimate(builtin_generator("kl"), rd, p, p, 50, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(mc_estimate(builtin_generator("kl"), RadialDensity::normal(3),
                              p, p, 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("student location pair: sampler and density agree with quadrature") {
  const RadialDensity rd = RadialDensity::student(3.0, 1);
  Vector mu2(1);
  mu2 << 1.0;
  const LocationScaleParam a = LocationScaleParam::standard(1);
  const LocationScaleParam b(mu2, SpdMatrix::identity(1));
  for (const char* name : {"kl", "h2"}) {
    CAPTURE(name);
    const FGenerator gen = parse_generator(name);
    const DivergenceEstimate mc = mc_estimate(gen, rd, a, b, 400000, 77);
    const double quad =
        quad_fdiv_1d(gen, density_1d(rd, 0.0, 1.0), density_1d(rd, 1.0, 1.0))
            .value;
    CHECK(std::abs(mc.value - quad) <= 3.0 * mc.std_error);
  }
}

TEST_CASE("runtime table shape") {
  const auto rows =
      tabulate_runtime(builtin_generator("kl"), {1, 4}, 50000, 13, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].d == 1);
  CHECK(rows[1].d == 4);
  for (const RuntimeRow& r : rows) {
    CHECK(r.n == 50000);
    CHECK(r.seconds_full > 0.0);
    CHECK(r.seconds_reduced > 0.0);
  }
  const std::string csv = runtime_table_csv(rows);
  CHECK(csv.rfind("d,n,seconds_full,seconds_reduced,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
