#include "divkit/spd.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace divkit {

namespace {

void check_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                ")");
  }
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("SpdMatrix: matrix must be square and non-empty");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("SpdMatrix: input is not symmetric");
  }
  Matrix sym = 0.5 * (m + m.transpose());
  symmetrized_ = (sym != m);
  m_ = std::move(sym);
  llt_.compute(m_);
  if (llt_.info() != Eigen::Success) {
    throw std::invalid_argument("SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(int dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

double SpdMatrix::log_det() const {
  const Matrix l = llt_.matrixL();
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

bool SpdMatrix::approx_equal(const SpdMatrix& other, double rel_tol) const {
  if (dim() != other.dim()) return false;
  const double scale = std::max(m_.cwiseAbs().maxCoeff(),
                                other.m_.cwiseAbs().maxCoeff());
  return (m_ - other.m_).cwiseAbs().maxCoeff() <= rel_tol * std::max(scale, 1.0);
}

double mahalanobis_sq(const Vector& mu1, const Vector& mu2,
                      const SpdMatrix& sigma) {
  check_same_dim(static_cast<int>(mu1.size()), static_cast<int>(mu2.size()),
                 "mahalanobis_sq");
  check_same_dim(static_cast<int>(mu1.size()), sigma.dim(), "mahalanobis_sq");
  const Vector diff = mu2 - mu1;
  const Vector y = sigma.llt().matrixL().solve(diff);
  return y.squaredNorm();
}

SpdMatrix sqrt_spd(const SpdMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("sqrt_spd: eigendecomposition failed");
  }
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix s = es.eigenvectors() * roots.asDiagonal() *
             es.eigenvectors().transpose();
  return SpdMatrix(0.5 * (s + s.transpose()));
}

Spectrum::Spectrum(std::vector<double> eigenvalues) : eig_(std::move(eigenvalues)) {
  if (eig_.empty()) throw std::invalid_argument("Spectrum: empty");
  std::sort(eig_.begin(), eig_.end());
  if (eig_.front() <= 0.0) {
    throw std::invalid_argument("Spectrum: eigenvalues must be positive");
  }
}

double Spectrum::log_product() const {
  double s = 0.0;
  for (double v : eig_) s += std::log(v);
  return s;
}

Spectrum relative_spectrum(const SpdMatrix& sigma1, const SpdMatrix& sigma2) {
  check_same_dim(sigma1.dim(), sigma2.dim(), "relative_spectrum");
  Eigen::SelfAdjointEigenSolver<Matrix> es1(sigma1.matrix());
  if (es1.info() != Eigen::Success) {
    throw std::runtime_error("relative_spectrum: eigendecomposition failed");
  }
  const Vector inv_roots = es1.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix inv_root = es1.eigenvectors() * inv_roots.asDiagonal() *
                          es1.eigenvectors().transpose();
  Matrix congr = inv_root * sigma2.matrix() * inv_root;
  congr = 0.5 * (congr + congr.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(congr);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("relative_spectrum: eigendecomposition failed");
  }
  std::vector<double> eig(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return Spectrum(std::move(eig));
}

LocationScaleParam::LocationScaleParam(Vector location, SpdMatrix scale,
                                       ScaleConvention convention)
    : location_(std::move(location)),
      sigma_(convention == ScaleConvention::Sigma
                 ? scale
                 : SpdMatrix(scale.matrix() * scale.matrix())),
      root_(convention == ScaleConvention::Root ? std::move(scale)
                                                : sqrt_spd(sigma_)) {
  check_same_dim(static_cast<int>(location_.size()), sigma_.dim(),
                 "LocationScaleParam");
}

LocationScaleParam LocationScaleParam::standard(int dim) {
  return LocationScaleParam(Vector::Zero(dim), SpdMatrix::identity(dim));
}

AffineElement::AffineElement(Vector t, Matrix a)
    : translation(std::move(t)), linear(std::move(a)) {
  if (linear.rows() != linear.cols() ||
      linear.rows() != translation.size()) {
    throw std::invalid_argument("AffineElement: dimension mismatch");
  }
  Eigen::FullPivLU<Matrix> lu(linear);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("AffineElement: linear part is singular");
  }
}

AffineElement affine_identity(int dim) {
  return AffineElement(Vector::Zero(dim), Matrix::Identity(dim, dim));
}

AffineElement affine_compose(const AffineElement& g1, const AffineElement& g2) {
  check_same_dim(g1.dim(), g2.dim(), "affine_compose");
  return AffineElement(g1.translation + g1.linear * g2.translation,
                       g1.linear * g2.linear);
}

AffineElement affine_inverse(const AffineElement& g) {
  Eigen::FullPivLU<Matrix> lu(g.linear);
  const Matrix inv = lu.inverse();
  return AffineElement(-(inv * g.translation), inv);
}

LocationScaleParam affine_apply(const AffineElement& g,
                                const LocationScaleParam& p) {
  check_same_dim(g.dim(), p.dim(), "affine_apply");
  Matrix s = g.linear * p.sigma().matrix() * g.linear.transpose();
  return LocationScaleParam(g.translation + g.linear * p.location(),
                            SpdMatrix(0.5 * (s + s.transpose())));
}

std::pair<LocationScaleParam, LocationScaleParam> canonicalize_pair(
    const LocationScaleParam& p1, const LocationScaleParam& p2) {
  check_same_dim(p1.dim(), p2.dim(), "canonicalize_pair");
  const int d = p1.dim();
  const SpdMatrix& root1 = p1.scale_root();
  const Vector t = root1.solve(Vector(p2.location() - p1.location()));
  // P1^{-1} Sigma2 P1^{-1}, symmetrized.
  const Matrix half = root1.solve(p2.sigma().matrix());
  Matrix s = root1.solve(Matrix(half.transpose()));
  s = 0.5 * (s + s.transpose());
  return {LocationScaleParam::standard(d),
          LocationScaleParam(t, SpdMatrix(std::move(s)))};
}

}  // namespace divkit
