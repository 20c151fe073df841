#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "divkit/generators.hpp"
#include "divkit/radial.hpp"
#include "divkit/spd.hpp"

namespace divkit {

enum class Method { mc, mc_reduced, quad_1d, quad_nd, closed };
std::string method_name(Method m);

/// A divergence value with its uncertainty and how it was obtained.
/// std_error is sample-sd / sqrt(n) for Monte Carlo methods, 0 for
/// deterministic ones.
struct DivergenceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  Method method = Method::closed;
  std::optional<std::uint64_t> seed;
  std::size_t n_clamped = 0;  // density-ratio underflows clamped to 1e-300
};

/// Resolves a worker count: request > 0 wins, then DIVKIT_THREADS, then
/// hardware concurrency.
int resolve_threads(int requested);

namespace detail {

/// Deterministic chunked Monte Carlo mean. The index range [0, n) is cut
/// into fixed-size chunks; chunk c draws from Rng(mix64(seed ^ c)) and the
/// per-chunk moments are merged in chunk order, so the result is
/// bit-identical for any worker count. `summand` returns the sample value
/// and may add to the clamp counter it is handed.
struct McAccumulation {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_clamped = 0;
};
McAccumulation mc_mean(
    std::size_t n, std::uint64_t seed, int threads,
    const std::function<double(Rng&, std::size_t* clamped)>& summand);

}  // namespace detail

/// Monte Carlo f-divergence estimate with proposal r = p1: the mean of
/// f(q(x_i)/p(x_i)) over x_i ~ p1, ratios formed in log space and clamped
/// below at 1e-300 (clamps counted). Throws on a non-finite summand or
/// accumulator, naming the offending sample: that signals an (f, family)
/// pair whose integral diverges.
DivergenceEstimate mc_estimate(const FGenerator& gen, const RadialDensity& rd,
                               const LocationScaleParam& p1,
                               const LocationScaleParam& p2, std::size_t n,
                               std::uint64_t seed, int threads = 0);

/// Same-scale normal pair reduced to dimension one: the divergence between
/// the originals equals the divergence between N(0,1) and N(sqrt(u),1) with
/// u the squared Mahalanobis separation.
struct ReducedPair {
  double delta_sq;
  LocationScaleParam p1;
  LocationScaleParam p2;
};
ReducedPair reduce_location(const LocationScaleParam& p1,
                            const LocationScaleParam& p2);

/// A univariate density handed to the quadrature oracle: log-density plus a
/// center used as an integration split point.
struct Density1d {
  std::function<double(double)> log_pdf;
  double center = 0.0;
};
Density1d density_1d(const RadialDensity& rd, double location, double scale);

/// Deterministic oracle: integral of p(x) f(q(x)/p(x)) over the line, split
/// at the two centers and their midpoint, absolute tolerance abs_tol with a
/// machine-precision relative floor. Tail regions where p < 1e-300 are
/// dropped in log space.
DivergenceEstimate quad_fdiv_1d(const FGenerator& gen, const Density1d& p,
                                const Density1d& q, double abs_tol = 1e-9);

/// Wall-clock comparison of full-dimensional vs reduced estimation at equal
/// sample counts.
struct RuntimeRow {
  int d;
  std::size_t n;
  double seconds_full;
  double seconds_reduced;
  double ratio;
};
std::vector<RuntimeRow> tabulate_runtime(const FGenerator& gen,
                                         const std::vector<int>& dims,
                                         std::size_t n,
                                         std::uint64_t seed = kDefaultSeed,
                                         int threads = 0);
std::string runtime_table_csv(const std::vector<RuntimeRow>& rows);

}  // namespace divkit
