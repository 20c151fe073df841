#include "divkit/estimators.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "divkit/quadrature.hpp"

namespace divkit {

namespace {

constexpr std::size_t kChunkSize = 1u << 16;
constexpr double kRatioFloor = 1e-300;
constexpr double kLogRatioFloor = -690.77552789821371;  // log(1e-300)

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double d = o.mean - mean;
    const std::size_t total = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(total);
    n = total;
  }
};

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::mc: return "mc";
    case Method::mc_reduced: return "mc_reduced";
    case Method::quad_1d: return "quad_1d";
    case Method::quad_nd: return "quad_nd";
    case Method::closed: return "closed";
  }
  return "unknown";
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIVKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

McAccumulation mc_mean(
    std::size_t n, std::uint64_t seed, int threads,
    const std::function<double(Rng&, std::size_t* clamped)>& summand) {
  if (n < 1) throw std::invalid_argument("mc_mean: n must be >= 1");
  const std::size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Welford> stats(n_chunks);
  std::vector<std::size_t> clamps(n_chunks, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks || failed.load(std::memory_order_relaxed)) return;
      Rng rng(mix64(seed ^ static_cast<std::uint64_t>(c)));
      Welford w;
      std::size_t clamped = 0;
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(begin + kChunkSize, n);
      for (std::size_t i = begin; i < end; ++i) {
        const double s = summand(rng, &clamped);
        if (!std::isfinite(s)) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!failed.exchange(true)) {
            error_message = "mc_mean: non-finite summand at sample " +
                            std::to_string(i) + " (value " +
                            std::to_string(s) + ")";
          }
          return;
        }
        w.add(s);
      }
      stats[c] = w;
      clamps[c] = clamped;
    }
  };

  const int n_workers =
      static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(resolve_threads(threads)), n_chunks));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error(error_message);

  Welford total;
  std::size_t clamped = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    total.merge(stats[c]);
    clamped += clamps[c];
  }
  if (!std::isfinite(total.mean) || !std::isfinite(total.m2)) {
    throw std::runtime_error("mc_mean: non-finite running moments (divergent integrand)");
  }
  McAccumulation out;
  out.mean = total.mean;
  out.std_error =
      total.n > 1
          ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                      static_cast<double>(total.n))
          : 0.0;
  out.n_clamped = clamped;
  return out;
}

}  // namespace detail

DivergenceEstimate mc_estimate(const FGenerator& gen, const RadialDensity& rd,
                               const LocationScaleParam& p1,
                               const LocationScaleParam& p2, std::size_t n,
                               std::uint64_t seed, int threads) {
  if (n < 100) throw std::invalid_argument("mc_estimate: n must be >= 100");
  if (p1.dim() != p2.dim() || p1.dim() != rd.dim()) {
    throw std::invalid_argument("mc_estimate: dimension mismatch");
  }
  const int d = rd.dim();
  auto summand = [&gen, &rd, &p1, &p2, d](Rng& rng, std::size_t* clamped) {
    thread_local Vector x;
    if (x.size() != d) x.resize(d);
    rd.sample_into(p1, rng, x);
    const double lr = rd.log_density(p2, x) - rd.log_density(p1, x);
    double ratio;
    if (lr < kLogRatioFloor) {
      ratio = kRatioFloor;
      ++*clamped;
    } else {
      ratio = std::exp(lr);
    }
    return gen.f(ratio);
  };
  const detail::McAccumulation acc = detail::mc_mean(n, seed, threads, summand);
  DivergenceEstimate est;
  est.value = acc.mean;
  est.std_error = acc.std_error;
  est.n_samples = n;
  est.method = Method::mc;
  est.seed = seed;
  est.n_clamped = acc.n_clamped;
  return est;
}

ReducedPair reduce_location(const LocationScaleParam& p1,
                            const LocationScaleParam& p2) {
  if (p1.dim() != p2.dim()) {
    throw std::invalid_argument("reduce_location: dimension mismatch");
  }
  if (!p1.sigma().approx_equal(p2.sigma(), 1e-10)) {
    throw std::invalid_argument("reduce_location: scale matrices differ");
  }
  const double u = mahalanobis_sq(p1.location(), p2.location(), p1.sigma());
  Vector zero(1), shifted(1);
  zero << 0.0;
  shifted << std::sqrt(u);
  const SpdMatrix unit = SpdMatrix::identity(1);
  return ReducedPair{u, LocationScaleParam(zero, unit),
                     LocationScaleParam(shifted, unit)};
}

Density1d density_1d(const RadialDensity& rd, double location, double scale) {
  if (rd.dim() != 1) throw std::invalid_argument("density_1d: rd must be 1-D");
  if (scale <= 0.0) throw std::invalid_argument("density_1d: scale must be > 0");
  const double log_scale = std::log(scale);
  Density1d d;
  d.center = location;
  d.log_pdf = [rd, location, scale, log_scale](double x) {
    const double z = (x - location) / scale;
    return rd.log_tilde_p(z * z) - log_scale;
  };
  return d;
}

DivergenceEstimate quad_fdiv_1d(const FGenerator& gen, const Density1d& p,
                                const Density1d& q, double abs_tol) {
  auto integrand = [&gen, &p, &q](double x) {
    const double lp = p.log_pdf(x);
    if (lp < kLogRatioFloor) return 0.0;  // p-tail truncation, in log space
    const double lq = q.log_pdf(x);
    const double lr = lq - lp;
    const double ratio = lr < kLogRatioFloor ? kRatioFloor : std::exp(lr);
    const double v = std::exp(lp) * gen.f(ratio);
    if (!std::isfinite(v)) {
      throw std::runtime_error("quad_fdiv_1d: non-finite integrand at x = " +
                               std::to_string(x));
    }
    return v;
  };
  const double lo = std::min(p.center, q.center);
  const double hi = std::max(p.center, q.center);
  const QuadResult r =
      integrate_real_line(integrand, {lo, 0.5 * (lo + hi), hi}, abs_tol);
  if (!r.converged) {
    throw std::runtime_error("quad_fdiv_1d: did not converge (error estimate " +
                             std::to_string(r.error_estimate) + ")");
  }
  DivergenceEstimate est;
  est.value = r.value;
  est.std_error = 0.0;
  est.n_samples = static_cast<std::size_t>(r.evaluations);
  est.method = Method::quad_1d;
  return est;
}

std::vector<RuntimeRow> tabulate_runtime(const FGenerator& gen,
                                         const std::vector<int>& dims,
                                         std::size_t n, std::uint64_t seed,
                                         int threads) {
  using clock = std::chrono::steady_clock;
  std::vector<RuntimeRow> rows;
  rows.reserve(dims.size());
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("tabulate_runtime: d must be >= 1");
    const RadialDensity rd = RadialDensity::normal(d);
    Vector mu2 = Vector::Zero(d);
    mu2[0] = 1.0;  // unit separation, so both paths estimate the same value
    const LocationScaleParam p1 = LocationScaleParam::standard(d);
    const LocationScaleParam p2(mu2, SpdMatrix::identity(d));

    const auto t0 = clock::now();
    DivergenceEstimate full = mc_estimate(gen, rd, p1, p2, n, seed, threads);
    const auto t1 = clock::now();
    const ReducedPair red = reduce_location(p1, p2);
    const RadialDensity rd1 = RadialDensity::normal(1);
    DivergenceEstimate reduced =
        mc_estimate(gen, rd1, red.p1, red.p2, n, seed, threads);
    const auto t2 = clock::now();
    (void)full;
    (void)reduced;

    RuntimeRow row;
    row.d = d;
    row.n = n;
    row.seconds_full = std::chrono::duration<double>(t1 - t0).count();
    row.seconds_reduced = std::chrono::duration<double>(t2 - t1).count();
    row.ratio = row.seconds_full / row.seconds_reduced;
    rows.push_back(row);
  }
  return rows;
}

std::string runtime_table_csv(const std::vector<RuntimeRow>& rows) {
  std::ostringstream os;
  os << "d,n,seconds_full,seconds_reduced,ratio\n";
  char buf[160];
  for (const RuntimeRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%zu,%.6f,%.6f,%.3f\n", r.d, r.n,
                  r.seconds_full, r.seconds_reduced, r.ratio);
    os << buf;
  }
  return os.str();
}

}  // namespace divkit
