#include "divkit/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace divkit {

namespace {
constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

RadialDensity::RadialDensity(bool is_normal, double nu, int dim,
                             std::string name)
    : normal_(is_normal), nu_(nu), dim_(dim), name_(std::move(name)) {
  if (dim_ < 1) throw std::invalid_argument("RadialDensity: dim must be >= 1");
  if (!normal_ && nu_ <= 0.0) {
    throw std::invalid_argument("RadialDensity: nu must be positive");
  }
  if (normal_) {
    log_norm_ = -0.5 * dim_ * kLog2Pi;
  } else {
    log_norm_ = std::lgamma(0.5 * (nu_ + dim_)) - std::lgamma(0.5 * nu_) -
                0.5 * dim_ * (std::log(nu_) + kLogPi);
  }
}

RadialDensity RadialDensity::normal(int dim) {
  return RadialDensity(true, 0.0, dim, "normal");
}

RadialDensity RadialDensity::student(double nu, int dim) {
  return RadialDensity(false, nu, dim,
                       nu == 1.0 ? "cauchy" : "student:" + std::to_string(nu));
}

RadialDensity RadialDensity::cauchy(int dim) { return student(1.0, dim); }

RadialDensity RadialDensity::parse(const std::string& family, int dim) {
  if (family == "normal") return normal(dim);
  if (family == "cauchy") return cauchy(dim);
  if (family.rfind("student:", 0) == 0) {
    std::size_t pos = 0;
    double nu = 0.0;
    const std::string arg = family.substr(8);
    try {
      nu = std::stod(arg, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != arg.size() || nu <= 0.0) {
      throw std::invalid_argument("RadialDensity: bad degrees of freedom '" +
                                  arg + "'");
    }
    return student(nu, dim);
  }
  throw std::invalid_argument("RadialDensity: unknown family '" + family + "'");
}

double RadialDensity::log_tilde_p(double r) const {
  if (r < 0.0) throw std::domain_error("log_tilde_p: r must be >= 0");
  if (normal_) return log_norm_ - 0.5 * r;
  return log_norm_ - 0.5 * (nu_ + dim_) * std::log1p(r / nu_);
}

double RadialDensity::tilde_p(double r) const { return std::exp(log_tilde_p(r)); }

double RadialDensity::tilde_p_prime(double r) const {
  if (normal_) return -0.5 * tilde_p(r);
  return -0.5 * (nu_ + dim_) / nu_ * tilde_p(r) / (1.0 + r / nu_);
}

double RadialDensity::log_density(const LocationScaleParam& p,
                                  const Vector& x) const {
  if (p.dim() != dim_ || x.size() != dim_) {
    throw std::invalid_argument("log_density: dimension mismatch");
  }
  const double r = mahalanobis_sq(p.location(), x, p.sigma());
  return -0.5 * p.sigma().log_det() + log_tilde_p(r);
}

double RadialDensity::density(const LocationScaleParam& p,
                              const Vector& x) const {
  return std::exp(log_density(p, x));
}

void RadialDensity::sample_into(const LocationScaleParam& p, Rng& rng,
                                Eigen::Ref<Vector> x) const {
  for (int i = 0; i < dim_; ++i) x[i] = rng.normal();
  if (!normal_) {
    const double w = rng.chi_square(nu_) / nu_;
    x /= std::sqrt(w);
  }
  x = p.location() + p.scale_root().matrix() * x;
}

Matrix RadialDensity::sample(const LocationScaleParam& p, std::size_t n,
                             std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Matrix out(static_cast<Eigen::Index>(n), dim_);
  Rng rng(seed);
  Vector x(dim_);
  for (std::size_t i = 0; i < n; ++i) {
    sample_into(p, rng, x);
    out.row(static_cast<Eigen::Index>(i)) = x;
  }
  return out;
}

double density_at(const RadialDensity& rd, const LocationScaleParam& p,
                  const Vector& x) {
  return rd.density(p, x);
}

double log_density_at(const RadialDensity& rd, const LocationScaleParam& p,
                      const Vector& x) {
  return rd.log_density(p, x);
}

Matrix sample(const RadialDensity& rd, const LocationScaleParam& p,
              std::size_t n, std::uint64_t seed) {
  return rd.sample(p, n, seed);
}

}  // namespace divkit
