#pragma once

#include <Eigen/QR>
#include <vector>

#include "divkit/rng.hpp"
#include "divkit/spd.hpp"

namespace divkit::testing {

inline Vector random_vector(Rng& rng, int d, double scale = 1.0) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
  return v;
}

inline Matrix random_matrix(Rng& rng, int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

/// Well-conditioned random SPD matrix: A A^T + 0.5 I.
inline SpdMatrix random_spd(Rng& rng, int d) {
  const Matrix a = random_matrix(rng, d);
  Matrix m = a * a.transpose() + 0.5 * Matrix::Identity(d, d);
  return SpdMatrix(0.5 * (m + m.transpose()));
}

inline Matrix random_orthogonal(Rng& rng, int d) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d));
  return qr.householderQ();
}

}  // namespace divkit::testing
