#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qopt/quaternion.hpp"
#include "qopt/real_linalg.hpp"

namespace qopt {

/// Dense quaternion vector, stored as four real component planes so that the
/// stacked real representation is a plain concatenation.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : a_(n, 0.0), b_(n, 0.0), c_(n, 0.0), d_(n, 0.0) {}

  static QVector zero(std::size_t n) { return QVector(n); }

  std::size_t size() const { return a_.size(); }

  Quaternion operator[](std::size_t t) const { return {a_[t], b_[t], c_[t], d_[t]}; }
  void set(std::size_t t, const Quaternion& v) {
    a_[t] = v.a;
    b_[t] = v.b;
    c_[t] = v.c;
    d_[t] = v.d;
  }

  RealVector& plane_a() { return a_; }
  RealVector& plane_b() { return b_; }
  RealVector& plane_c() { return c_; }
  RealVector& plane_d() { return d_; }
  const RealVector& plane_a() const { return a_; }
  const RealVector& plane_b() const { return b_; }
  const RealVector& plane_c() const { return c_; }
  const RealVector& plane_d() const { return d_; }

 private:
  RealVector a_, b_, c_, d_;
};

QVector operator+(const QVector& x, const QVector& y);
QVector operator-(const QVector& x, const QVector& y);
QVector operator-(const QVector& x);
QVector operator*(double s, const QVector& x);
QVector scale_left(const Quaternion& mu, const QVector& x);   // entrywise mu * x_t
QVector scale_right(const QVector& x, const Quaternion& mu);  // entrywise x_t * mu

QVector conj(const QVector& x);
QVector involution(const QVector& x, CanonicalUnit axis);
QVector real_part(const QVector& x);  // entrywise Re x_t as real quaternions

/// Full quaternion dot product sum_t conj(x_t) y_t.
Quaternion dot_h(const QVector& x, const QVector& y);
/// Real inner product Re(x^H y).
double inner_product(const QVector& x, const QVector& y);
double norm2(const QVector& x);

/// Dense quaternion matrix stored as four real planes.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0), b_(rows * cols, 0.0),
        c_(rows * cols, 0.0), d_(rows * cols, 0.0) {}

  static QMatrix identity(std::size_t n);
  static QMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Quaternion at(std::size_t i, std::size_t j) const {
    const std::size_t t = i * cols_ + j;
    return {a_[t], b_[t], c_[t], d_[t]};
  }
  void set(std::size_t i, std::size_t j, const Quaternion& v) {
    const std::size_t t = i * cols_ + j;
    a_[t] = v.a;
    b_[t] = v.b;
    c_[t] = v.c;
    d_[t] = v.d;
  }

  const RealVector& plane_a() const { return a_; }
  const RealVector& plane_b() const { return b_; }
  const RealVector& plane_c() const { return c_; }
  const RealVector& plane_d() const { return d_; }

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  RealVector a_, b_, c_, d_;
};

QMatrix operator+(const QMatrix& x, const QMatrix& y);
QMatrix operator-(const QMatrix& x, const QMatrix& y);
QMatrix operator*(double s, const QMatrix& x);
QMatrix scale_left(const Quaternion& mu, const QMatrix& x);
QMatrix scale_right(const QMatrix& x, const Quaternion& mu);

/// Quaternion matrix product; entry (i,j) = sum_k A_ik B_kj with left-to-right
/// Hamilton products.
QMatrix matmul(const QMatrix& a, const QMatrix& b);
QVector matvec(const QMatrix& a, const QVector& x);
QMatrix hermitian(const QMatrix& a);
QMatrix conj(const QMatrix& a);
QMatrix involution(const QMatrix& a, CanonicalUnit axis);
QVector column(const QMatrix& a, std::size_t j);
void set_block(QMatrix& dst, std::size_t i0, std::size_t j0, const QMatrix& src);

/// Stacked real representation (q_a; q_b; q_c; q_d) of a length-n quaternion
/// vector, as a real vector of length 4n.
struct AugRealVector {
  RealVector data;
};

/// Stacked involution representation (q; q^i; q^j; q^k), a quaternion vector of
/// length 4n whose blocks 2-4 are the canonical involutions of block 1.
struct AugQuatVector {
  QVector data;
};

AugRealVector to_aug_real(const QVector& q);
QVector from_aug_real(const AugRealVector& x);  // throws unless length % 4 == 0
AugQuatVector to_aug_quat(const QVector& q);
QVector project_first_block(const AugQuatVector& h);  // throws unless length % 4 == 0

/// The 4n x 4n change-of-representation matrix with J^{-1} = (1/4) J^H.
QMatrix j_matrix(std::size_t n);

double inner_product_aug_real(const AugRealVector& x, const AugRealVector& y);
/// (1/4) h^H g; real-valued for members of the stacked involution set. The
/// real part is returned.
double inner_product_aug_quat(const AugQuatVector& x, const AugQuatVector& y);

// CSV persistence: first line "rows,cols", then one line "i,j,a,b,c,d" per
// entry with 0-based indices. Vectors are stored as n x 1 matrices.
void save_qmatrix_csv(const std::string& path, const QMatrix& m);
QMatrix load_qmatrix_csv(const std::string& path);
void save_qvector_csv(const std::string& path, const QVector& v);
QVector load_qvector_csv(const std::string& path);

}  // namespace qopt
