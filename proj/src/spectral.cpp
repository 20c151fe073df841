#include "divkit/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "divkit/quadrature.hpp"

namespace divkit {

namespace {

constexpr double kRatioFloor = 1e-300;
constexpr double kLogRatioFloor = -690.77552789821371;

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::domain_error("bhattacharyya_rho: beta must be in (0, 1)");
  }
}

}  // namespace

ScalePair::ScalePair(Vector mu, SpdMatrix sigma1, SpdMatrix sigma2)
    : mu_(std::move(mu)),
      sigma1_(std::move(sigma1)),
      sigma2_(std::move(sigma2)),
      spectrum_(relative_spectrum(sigma1_, sigma2_)) {
  if (mu_.size() != sigma1_.dim() || sigma1_.dim() != sigma2_.dim()) {
    throw std::invalid_argument("ScalePair: dimension mismatch");
  }
}

double spectral_kl(const Spectrum& spectrum) {
  double sum = 0.0;
  for (double lam : spectrum.values()) {
    sum += 0.5 * (1.0 / lam - 1.0 + std::log(lam));
  }
  return sum;
}

double bhattacharyya_rho(double beta, const SpdMatrix& sigma1,
                         const SpdMatrix& sigma2) {
  check_beta(beta);
  if (sigma1.dim() != sigma2.dim()) {
    throw std::invalid_argument("bhattacharyya_rho: dimension mismatch");
  }
  const SpdMatrix mix(Matrix((1.0 - beta) * sigma1.matrix() +
                             beta * sigma2.matrix()));
  const double log_rho = 0.5 * (1.0 - beta) * sigma1.log_det() +
                         0.5 * beta * sigma2.log_det() - 0.5 * mix.log_det();
  return std::exp(log_rho);
}

double bhattacharyya_rho_spectral(double beta, const Spectrum& spectrum) {
  check_beta(beta);
  double log_rho = 0.0;
  for (double lam : spectrum.values()) {
    log_rho += 0.5 * (beta * std::log(lam) - std::log1p(beta * (lam - 1.0)));
  }
  return std::exp(log_rho);
}

double alpha_div_scale(double alpha, const SpdMatrix& sigma1,
                       const SpdMatrix& sigma2) {
  const double c = 1.0 - alpha * alpha;
  if (std::abs(c) < 1e-9) {
    throw std::domain_error(
        "alpha_div_scale: alpha = +-1 is the KL endpoint; use spectral_kl");
  }
  return 4.0 / c * (1.0 - bhattacharyya_rho(0.5 * (1.0 - alpha), sigma1, sigma2));
}

namespace {

/// log of the Prop-style density ratio at y for reciprocal eigenvalues nu:
/// (1/2) sum log nu_i + log tilde_p(sum nu_i y_i^2) - log tilde_p(|y|^2).
double log_spectral_ratio(const RadialDensity& rd,
                          const std::vector<double>& nu, double half_log_prod,
                          const Vector& y) {
  double r_scaled = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    r_scaled += nu[static_cast<std::size_t>(i)] * y[i] * y[i];
  }
  return half_log_prod + rd.log_tilde_p(r_scaled) -
         rd.log_tilde_p(y.squaredNorm());
}

}  // namespace

DivergenceEstimate spectral_fdiv_generic(const FGenerator& gen,
                                         const RadialDensity& rd,
                                         const Spectrum& spectrum,
                                         std::size_t n, std::uint64_t seed,
                                         int threads) {
  if (n < 100) throw std::invalid_argument("spectral_fdiv_generic: n must be >= 100");
  if (rd.dim() != spectrum.size()) {
    throw std::invalid_argument("spectral_fdiv_generic: dimension mismatch");
  }
  const int d = rd.dim();
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(d));
  double half_log_prod = 0.0;
  for (double lam : spectrum.values()) {
    nu.push_back(1.0 / lam);
    half_log_prod += -0.5 * std::log(lam);
  }
  const LocationScaleParam standard = LocationScaleParam::standard(d);
  auto summand = [&gen, &rd, &standard, nu, half_log_prod, d](
                     Rng& rng, std::size_t* clamped) {
    thread_local Vector y;
    if (y.size() != d) y.resize(d);
    rd.sample_into(standard, rng, y);
    const double lr = log_spectral_ratio(rd, nu, half_log_prod, y);
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

DivergenceEstimate spectral_fdiv_quad(const FGenerator& gen,
                                      const RadialDensity& rd,
                                      const Spectrum& spectrum,
                                      double abs_tol) {
  const int d = rd.dim();
  if (d != spectrum.size()) {
    throw std::invalid_argument("spectral_fdiv_quad: dimension mismatch");
  }
  if (d > 2) {
    throw std::invalid_argument(
        "spectral_fdiv_quad: tensor quadrature only for d <= 2");
  }
  std::vector<double> nu;
  double half_log_prod = 0.0;
  for (double lam : spectrum.values()) {
    nu.push_back(1.0 / lam);
    half_log_prod += -0.5 * std::log(lam);
  }

  auto point_value = [&gen, &rd, &nu, half_log_prod](const Vector& y) {
    const double lp = rd.log_tilde_p(y.squaredNorm());
    if (lp < kLogRatioFloor) return 0.0;
    const double lr = log_spectral_ratio(rd, nu, half_log_prod, y);
    const double ratio = lr < kLogRatioFloor ? kRatioFloor : std::exp(lr);
    return std::exp(lp) * gen.f(ratio);
  };

  QuadResult r;
  if (d == 1) {
    Vector y(1);
    r = integrate_real_line(
        [&point_value, &y](double t) mutable {
          y[0] = t;
          return point_value(y);
        },
        {0.0}, abs_tol);
  } else {
    // Iterated adaptive quadrature; the inner pass runs tighter.
    auto outer = [&point_value, abs_tol](double y2) {
      Vector y(2);
      const QuadResult inner = integrate_real_line(
          [&point_value, &y, y2](double y1) mutable {
            y[0] = y1;
            y[1] = y2;
            return point_value(y);
          },
          {0.0}, abs_tol * 1e-3);
      return inner.value;
    };
    r = integrate_real_line(outer, {0.0}, abs_tol);
  }
  if (!r.converged) {
    throw std::runtime_error("spectral_fdiv_quad: quadrature did not converge");
  }
  DivergenceEstimate est;
  est.value = r.value;
  est.std_error = 0.0;
  est.n_samples = static_cast<std::size_t>(r.evaluations);
  est.method = Method::quad_nd;
  return est;
}

DivergenceEstimate mc_affinity(double beta, const RadialDensity& rd,
                               const LocationScaleParam& p1,
                               const LocationScaleParam& p2, std::size_t n,
                               std::uint64_t seed, int threads) {
  check_beta(beta);
  if (n < 100) throw std::invalid_argument("mc_affinity: n must be >= 100");
  if (p1.dim() != p2.dim() || p1.dim() != rd.dim()) {
    throw std::invalid_argument("mc_affinity: dimension mismatch");
  }
  const int d = rd.dim();
  const double expo = 1.0 - beta;
  auto summand = [&rd, &p1, &p2, expo, d](Rng& rng, std::size_t* clamped) {
    thread_local Vector x;
    if (x.size() != d) x.resize(d);
    rd.sample_into(p1, rng, x);
    const double lr = rd.log_density(p2, x) - rd.log_density(p1, x);
    if (expo * lr < kLogRatioFloor) {
      ++*clamped;
      return kRatioFloor;
    }
    return std::exp(expo * lr);
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

}  // namespace divkit
