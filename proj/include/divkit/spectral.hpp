#pragma once

#include <cstdint>

#include "divkit/estimators.hpp"
#include "divkit/generators.hpp"
#include "divkit/radial.hpp"
#include "divkit/spd.hpp"

namespace divkit {

/// A mu-centered scale pair with its relative spectrum cached.
class ScalePair {
 public:
  ScalePair(Vector mu, SpdMatrix sigma1, SpdMatrix sigma2);

  int dim() const { return static_cast<int>(mu_.size()); }
  const Vector& mu() const { return mu_; }
  const SpdMatrix& sigma1() const { return sigma1_; }
  const SpdMatrix& sigma2() const { return sigma2_; }
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  Vector mu_;
  SpdMatrix sigma1_;
  SpdMatrix sigma2_;
  Spectrum spectrum_;
};

/// KL between mu-centered normals from the relative spectrum of
/// Sigma2 Sigma1^{-1}: sum of (1/lambda - 1 + log lambda)/2 over the
/// eigenvalues. Nonnegative, zero only at the all-ones spectrum, and
/// separable across eigenvalues.
double spectral_kl(const Spectrum& spectrum);

/// Skew Bhattacharyya affinity rho_beta = int p^beta q^(1-beta) between
/// mu-centered normals (p carries sigma1), determinant form evaluated in
/// log space: det(S1)^((1-b)/2) det(S2)^(b/2) / det((1-b)S1 + bS2)^(1/2).
double bhattacharyya_rho(double beta, const SpdMatrix& sigma1,
                         const SpdMatrix& sigma2);

/// Same affinity from the relative spectrum:
/// prod_i sqrt(lambda_i^beta / (1 + beta (lambda_i - 1))).
double bhattacharyya_rho_spectral(double beta, const Spectrum& spectrum);

/// alpha-divergence between mu-centered normals,
/// 4/(1-alpha^2) (1 - rho_{(1-alpha)/2}); throws at alpha = +-1 (callers
/// route the KL endpoints to spectral_kl).
double alpha_div_scale(double alpha, const SpdMatrix& sigma1,
                       const SpdMatrix& sigma2);

/// Generic scale-family f-divergence from the relative spectrum, for any
/// radial family: Monte Carlo average over y drawn from the standard
/// density of f( (prod nu)^(1/2) tilde_p(sum nu_i y_i^2) / tilde_p(|y|^2) )
/// with nu_i the reciprocals of the Sigma2 Sigma1^{-1} eigenvalues.
/// Inherits the chunked deterministic seeding contract.
DivergenceEstimate spectral_fdiv_generic(const FGenerator& gen,
                                         const RadialDensity& rd,
                                         const Spectrum& spectrum,
                                         std::size_t n, std::uint64_t seed,
                                         int threads = 0);

/// Deterministic tensor-quadrature route for d <= 2, method quad_nd.
DivergenceEstimate spectral_fdiv_quad(const FGenerator& gen,
                                      const RadialDensity& rd,
                                      const Spectrum& spectrum,
                                      double abs_tol = 1e-6);

/// Monte Carlo affinity E_p[(q/p)^(1-beta)] = int p^beta q^(1-beta), used to
/// validate the closed forms above.
DivergenceEstimate mc_affinity(double beta, const RadialDensity& rd,
                               const LocationScaleParam& p1,
                               const LocationScaleParam& p2, std::size_t n,
                               std::uint64_t seed, int threads = 0);

}  // namespace divkit
