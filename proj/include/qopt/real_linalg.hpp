#pragma once

#include <cstddef>
#include <vector>

namespace qopt {

using RealVector = std::vector<double>;

/// Dense row-major real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<double> data_;
};

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);
RealMatrix transpose(const RealMatrix& a);
RealVector matvec(const RealMatrix& a, const RealVector& x);

double dot(const RealVector& x, const RealVector& y);
double norm2(const RealVector& x);
RealVector operator+(const RealVector& x, const RealVector& y);
RealVector operator-(const RealVector& x, const RealVector& y);
RealVector operator*(double s, const RealVector& x);

/// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
/// Construction throws std::runtime_error when A is not positive definite.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const RealMatrix& a);
  RealVector solve(RealVector rhs) const;
  std::size_t dim() const { return l_.rows(); }

 private:
  RealMatrix l_;
};

/// LU factorization with partial pivoting for general square systems.
/// Construction throws std::runtime_error when A is numerically singular.
class LuFactor {
 public:
  explicit LuFactor(const RealMatrix& a);
  RealVector solve(RealVector rhs) const;
  std::size_t dim() const { return lu_.rows(); }

 private:
  RealMatrix lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace qopt
