#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <utility>
#include <vector>

namespace divkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive-definite matrix with its Cholesky factor computed at
/// construction. Construction rejects asymmetric input (relative tolerance
/// 1e-12, after symmetrizing as (M + M^T)/2) and matrices that are not
/// positive definite. Immutable afterwards; safe to share across threads.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);
  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  const Eigen::LLT<Matrix>& llt() const { return llt_; }
  Matrix cholesky_lower() const { return llt_.matrixL(); }

  /// log det, from the Cholesky diagonal.
  double log_det() const;

  Vector solve(const Vector& b) const { return llt_.solve(b); }
  Matrix solve(const Matrix& b) const { return llt_.solve(b); }

  /// Whether (M + M^T)/2 changed the input bits.
  bool was_symmetrized() const { return symmetrized_; }

  bool approx_equal(const SpdMatrix& other, double rel_tol = 1e-10) const;

 private:
  Matrix m_;
  Eigen::LLT<Matrix> llt_;
  bool symmetrized_ = false;
};

/// Squared Mahalanobis distance (mu2 - mu1)^T Sigma^{-1} (mu2 - mu1),
/// computed as |L^{-1}(mu2 - mu1)|^2 with a triangular solve.
double mahalanobis_sq(const Vector& mu1, const Vector& mu2,
                      const SpdMatrix& sigma);

/// Unique SPD square root, via symmetric eigendecomposition.
SpdMatrix sqrt_spd(const SpdMatrix& sigma);

/// Eigenvalues of Sigma2 Sigma1^{-1}, sorted ascending, all positive.
/// Holds the relative spectrum of an ordered SPD pair.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> eigenvalues);

  int size() const { return static_cast<int>(eig_.size()); }
  double operator[](int i) const { return eig_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return eig_; }
  double log_product() const;

 private:
  std::vector<double> eig_;  // ascending
};

/// Relative spectrum of (sigma1, sigma2): the eigenvalues of
/// Sigma2 Sigma1^{-1}, obtained from the symmetric congruence
/// Sigma1^{-1/2} Sigma2 Sigma1^{-1/2} so they come out real and positive.
Spectrum relative_spectrum(const SpdMatrix& sigma1, const SpdMatrix& sigma2);

enum class ScaleConvention { Sigma, Root };

/// One member (location, scale) of a location-scale family. The scale can be
/// given either as Sigma or as the SPD root P with Sigma = P P^T; both
/// representations are kept. Immutable.
class LocationScaleParam {
 public:
  LocationScaleParam(Vector location, SpdMatrix scale,
                     ScaleConvention convention = ScaleConvention::Sigma);
  static LocationScaleParam standard(int dim);

  int dim() const { return static_cast<int>(location_.size()); }
  const Vector& location() const { return location_; }
  const SpdMatrix& sigma() const { return sigma_; }
  /// SPD root P with P P^T = Sigma.
  const SpdMatrix& scale_root() const { return root_; }

 private:
  Vector location_;
  SpdMatrix sigma_;
  SpdMatrix root_;
};

/// Element (l, A) of the affine group, A invertible.
struct AffineElement {
  Vector translation;
  Matrix linear;

  AffineElement(Vector t, Matrix a);
  int dim() const { return static_cast<int>(translation.size()); }
};

AffineElement affine_identity(int dim);
/// Semidirect product (l1 + A1 l2, A1 A2).
AffineElement affine_compose(const AffineElement& g1, const AffineElement& g2);
/// Inverse (-A^{-1} l, A^{-1}).
AffineElement affine_inverse(const AffineElement& g);
/// Action on parameters: (l + A mu, A Sigma A^T).
LocationScaleParam affine_apply(const AffineElement& g,
                                const LocationScaleParam& p);

/// Moves (p1, p2) to ((0, I), (P1^{-1}(l2 - l1), Sigma' )) by the inverse
/// group element of p1, with Sigma' = P1^{-1} Sigma2 P1^{-1} the SPD
/// representative of the transformed scale. Divergences are invariant under
/// this move and it is idempotent.
std::pair<LocationScaleParam, LocationScaleParam> canonicalize_pair(
    const LocationScaleParam& p1, const LocationScaleParam& p2);

}  // namespace divkit
