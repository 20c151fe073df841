#pragma once

#include <cstdint>
#include <string>

#include "divkit/rng.hpp"
#include "divkit/spd.hpp"

namespace divkit {

/// A standard spherical density p(x) = tilde_p(|x|^2) on R^d and the
/// location-scale family it generates. Families: normal, student(nu) with
/// nu > 0, cauchy = student(1). Immutable; sampling takes an explicit seed
/// (or caller-owned Rng), so callers parallelize by seed-splitting.
class RadialDensity {
 public:
  static RadialDensity normal(int dim);
  static RadialDensity student(double nu, int dim);
  static RadialDensity cauchy(int dim);
  /// CLI names: normal, cauchy, student:<nu>.
  static RadialDensity parse(const std::string& family, int dim);

  int dim() const { return dim_; }
  bool is_normal() const { return normal_; }
  double nu() const { return nu_; }
  const std::string& family_name() const { return name_; }

  /// Radial profile at r = |x|^2 >= 0, and its log / derivative.
  double tilde_p(double r) const;
  double log_tilde_p(double r) const;
  double tilde_p_prime(double r) const;

  /// Density of the (location, scale) member at x:
  /// det(Sigma)^{-1/2} tilde_p(Delta^2_Sigma(x, mu)).
  double density(const LocationScaleParam& p, const Vector& x) const;
  /// Same in log space; no intermediate underflow for Delta^2 up to 1e4
  /// and far beyond.
  double log_density(const LocationScaleParam& p, const Vector& x) const;

  /// Draws one vector into x (size d) using the caller's generator:
  /// x = mu + P z for normal, x = mu + P z / sqrt(chi2_nu / nu) for student,
  /// with a single shared chi-square scalar per draw.
  void sample_into(const LocationScaleParam& p, Rng& rng,
                   Eigen::Ref<Vector> x) const;

  /// n deterministic draws (rows) for a given seed.
  Matrix sample(const LocationScaleParam& p, std::size_t n,
                std::uint64_t seed) const;

 private:
  RadialDensity(bool is_normal, double nu, int dim, std::string name);
  bool normal_;
  double nu_;
  int dim_;
  std::string name_;
  double log_norm_;  // log normalizing constant of tilde_p
};

/// Free-function spellings of the member operations.
double density_at(const RadialDensity& rd, const LocationScaleParam& p,
                  const Vector& x);
double log_density_at(const RadialDensity& rd, const LocationScaleParam& p,
                      const Vector& x);
Matrix sample(const RadialDensity& rd, const LocationScaleParam& p,
              std::size_t n, std::uint64_t seed);

}  // namespace divkit
