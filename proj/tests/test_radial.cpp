#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "divkit/quadrature.hpp"
#include "divkit/radial.hpp"
#include "test_util.hpp"

using namespace divkit;
using namespace divkit::testing;

namespace {

double unit_sphere_area(int d) {
  return 2.0 * std::pow(3.14159265358979323846, 0.5 * d) /
         std::tgamma(0.5 * d);
}

std::vector<RadialDensity> families(int d) {
  return {RadialDensity::normal(d), RadialDensity::cauchy(d),
          RadialDensity::student(2.5, d)};
}

}  // namespace

TEST_CASE("radial profiles integrate to one") {
  for (int d : {1, 2, 3}) {
    for (const RadialDensity& rd : families(d)) {
      CAPTURE(rd.family_name());
      CAPTURE(d);
      const double area = unit_sphere_area(d);
      auto shell = [&rd, area, d](double r) {
        return area * std::pow(r, d - 1) * rd.tilde_p(r * r);
      };
      const QuadResult q = integrate_half_line(shell, 0.0, 1e-9);
      CHECK(q.converged);
      CHECK(q.value == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("radial profile is positive and strictly decreasing") {
  for (const RadialDensity& rd : families(2)) {
    CAPTURE(rd.family_name());
    double prev = rd.tilde_p(0.0);
    CHECK(prev > 0.0);
    for (int i = 1; i < 1000; ++i) {
      const double r = 100.0 * i / 999.0;
      const double v = rd.tilde_p(r);
      CHECK(v > 0.0);
      CHECK(v < prev);
      CHECK(rd.tilde_p_prime(r) < 0.0);
      prev = v;
    }
  }
}

TEST_CASE("cauchy is exactly student with one degree of freedom") {
  const RadialDensity c = RadialDensity::cauchy(3);
  const RadialDensity s1 = RadialDensity::student(1.0, 3);
  for (double r : {0.0, 0.5, 3.0, 42.0, 1e4}) {
    CHECK(std::abs(c.log_tilde_p(r) - s1.log_tilde_p(r)) <= 1e-14);
  }
  const LocationScaleParam p = LocationScaleParam::standard(3);
  CHECK((c.sample(p, 32, 9) - s1.sample(p, 32, 9)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pinned density values") {
  const RadialDensity n1 = RadialDensity::normal(1);
  const LocationScaleParam std1 = LocationScaleParam::standard(1);
  Vector x0(1);
  x0 << 0.0;
  CHECK(density_at(n1, std1, x0) ==
        doctest::Approx(0.39894228040143268).epsilon(1e-12));

  const RadialDensity c2 = RadialDensity::cauchy(2);
  const LocationScaleParam std2 = LocationScaleParam::standard(2);
  Vector y0(2);
  y0 << 0.0, 0.0;
  // Gamma(3/2) / pi^(3/2) = 1/(2 pi) at the mode.
  CHECK(density_at(c2, std2, y0) ==
        doctest::Approx(0.15915494309189535).epsilon(1e-12));
}

TEST_CASE("density transforms by the change-of-variable identity") {
  Rng rng(55);
  const int d = 3;
  for (const RadialDensity& rd : families(d)) {
    CAPTURE(rd.family_name());
    const LocationScaleParam p(random_vector(rng, d), random_spd(rng, d));
    const LocationScaleParam std_p = LocationScaleParam::standard(d);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector x = random_vector(rng, d, 2.0);
      const Vector z = p.scale_root().solve(Vector(x - p.location()));
      const double lhs = rd.density(p, x);
      const double rhs = rd.density(std_p, z) *
                         std::exp(-0.5 * p.sigma().log_det());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("log density stays finite deep in the tail") {
  const RadialDensity n1 = RadialDensity::normal(1);
  const LocationScaleParam std1 = LocationScaleParam::standard(1);
  Vector far(1);
  far << 100.0;  // squared separation 1e4
  const double ld = log_density_at(n1, std1, far);
  CHECK(std::isfinite(ld));
  CHECK(ld == doctest::Approx(-5000.9189385332047).epsilon(1e-12));
}

TEST_CASE("sampling is deterministic per seed") {
  const RadialDensity rd = RadialDensity::student(2.0, 3);
  Rng rng(8);
  const LocationScaleParam p(random_vector(rng, 3), random_spd(rng, 3));
  const Matrix a = rd.sample(p, 100, 1234);
  const Matrix b = rd.sample(p, 100, 1234);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const Matrix c = rd.sample(p, 100, 1235);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("normal sample moments match the parameters") {
  const int d = 2;
  const RadialDensity rd = RadialDensity::normal(d);
  const std::size_t n = 1000000;
  const LocationScaleParam std_p = LocationScaleParam::standard(d);
  const Matrix draws = rd.sample(std_p, n, 2024);

  const Vector mean = draws.colwise().mean();
  for (int j = 0; j < d; ++j) {
    CHECK(std::abs(mean[j]) <= 4.0 / std::sqrt(static_cast<double>(n)));
  }
  const Matrix centered = draws.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CHECK(std::abs(cov(i, j) - (i == j ? 1.0 : 0.0)) <= 0.01);
    }
  }
}

TEST_CASE("cauchy sample median sits at the location") {
  const RadialDensity rd = RadialDensity::cauchy(1);
  Vector mu(1);
  mu << 0.75;
  const LocationScaleParam p(mu, SpdMatrix::identity(1));
  const std::size_t n = 1000000;
  Matrix draws = rd.sample(p, n, 77);
  std::vector<double> xs(draws.data(), draws.data() + n);
  std::nth_element(xs.begin(), xs.begin() + static_cast<long>(n / 2), xs.end());
  CHECK(std::abs(xs[n / 2] - 0.75) <= 0.01);
}

TEST_CASE("family parsing") {
  CHECK(RadialDensity::parse("normal", 2).is_normal());
  CHECK(RadialDensity::parse("cauchy", 2).nu() == 1.0);
  CHECK(RadialDensity::parse("student:2.5", 2).nu() == doctest::Approx(2.5));
  CHECK_THROWS_AS(RadialDensity::parse("student:-1", 2), std::invalid_argument);
  CHECK_THROWS_AS(RadialDensity::parse("student:abc", 2), std::invalid_argument);
  CHECK_THROWS_AS(RadialDensity::parse("laplace", 2), std::invalid_argument);
  CHECK_THROWS_AS(RadialDensity::normal(0), std::invalid_argument);
}
