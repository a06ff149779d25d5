#pragma once

#include <string>

#include "qopt/qlinalg.hpp"

namespace qopt {

/// Constraint A1 q + A2 q^i + A3 q^j + A4 q^k = b. The strictly affine
/// constraint A q = b is the special case A2 = A3 = A4 = 0.
struct WidelyAffineMap {
  QMatrix a1, a2, a3, a4;  // p x n
  QVector b;               // length p

  WidelyAffineMap() = default;
  WidelyAffineMap(QMatrix a1_, QMatrix a2_, QMatrix a3_, QMatrix a4_, QVector b_);

  std::size_t out_dim() const { return a1.rows(); }
  std::size_t in_dim() const { return a1.cols(); }

  static WidelyAffineMap strictly_affine(QMatrix a, QVector b);
  static WidelyAffineMap identity(std::size_t n);
};

/// Constraint residual A1 q + A2 q^i + A3 q^j + A4 q^k - b; zero iff q feasible.
QVector apply(const WidelyAffineMap& m, const QVector& q);
/// Linear part only (b dropped).
QVector apply_linear(const WidelyAffineMap& m, const QVector& q);

struct AugRealSystem {
  RealMatrix a;  // 4p x 4n
  RealVector b;  // 4p
};

/// Equivalent real system: apply(m, q) = 0 iff a * to_aug_real(q) = b.
AugRealSystem to_aug_real_matrix(const WidelyAffineMap& m);

/// Structured 4p x 4n quaternion matrix whose action on the stacked involution
/// vector reproduces the constraint; equals (1/4) J_p * A_real * J_n^H.
QMatrix to_aug_quat_matrix(const WidelyAffineMap& m);

/// Inverse of to_aug_real_matrix (exact bijection on the matrix part).
WidelyAffineMap from_aug_real_matrix(const RealMatrix& ar, const RealVector& br);

/// A1^H lam + (A2^H lam)^i + (A3^H lam)^j + (A4^H lam)^k. True adjoint of the
/// linear part under the real inner product Re(x^H y).
QVector adjoint_apply(const WidelyAffineMap& m, const QVector& lam);

/// Stores the map as five CSV files next to a JSON manifest {p, n, paths}.
void save_widely_affine(const WidelyAffineMap& m, const std::string& manifest_path);
WidelyAffineMap load_widely_affine(const std::string& manifest_path);

}  // namespace qopt
