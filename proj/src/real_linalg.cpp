#include "qopt/real_linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace qopt {

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("real matmul: inner dimensions do not agree");
  }
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("real matrix add: shape mismatch");
  }
  RealMatrix out = a;
  for (std::size_t t = 0; t < out.data().size(); ++t) {
    out.data()[t] += b.data()[t];
  }
  return out;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("real matrix sub: shape mismatch");
  }
  RealMatrix out = a;
  for (std::size_t t = 0; t < out.data().size(); ++t) {
    out.data()[t] -= b.data()[t];
  }
  return out;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix out = a;
  for (double& v : out.data()) {
    v *= s;
  }
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = a(i, j);
    }
  }
  return out;
}

RealVector matvec(const RealMatrix& a, const RealVector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("real matvec: dimension mismatch");
  }
  RealVector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      s += a(i, j) * x[j];
    }
    out[i] = s;
  }
  return out;
}

double dot(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("real dot: length mismatch");
  }
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    s += x[t] * y[t];
  }
  return s;
}

double norm2(const RealVector& x) { return std::sqrt(dot(x, x)); }

RealVector operator+(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("real vector add: length mismatch");
  }
  RealVector out = x;
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] += y[t];
  }
  return out;
}

RealVector operator-(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("real vector sub: length mismatch");
  }
  RealVector out = x;
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] -= y[t];
  }
  return out;
}

RealVector operator*(double s, const RealVector& x) {
  RealVector out = x;
  for (double& v : out) {
    v *= s;
  }
  return out;
}

CholeskyFactor::CholeskyFactor(const RealMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky: matrix must be square");
  }
  const std::size_t n = a.rows();
  l_ = RealMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) {
      diag -= l_(j, k) * l_(j, k);
    }
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw std::runtime_error("cholesky: matrix is not positive definite");
    }
    const double ljj = std::sqrt(diag);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        s -= l_(i, k) * l_(j, k);
      }
      l_(i, j) = s / ljj;
    }
  }
}

RealVector CholeskyFactor::solve(RealVector rhs) const {
  const std::size_t n = l_.rows();
  if (rhs.size() != n) {
    throw std::invalid_argument("cholesky solve: rhs length mismatch");
  }
  // forward L y = rhs
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) {
      s -= l_(i, k) * rhs[k];
    }
    rhs[i] = s / l_(i, i);
  }
  // backward L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) {
      s -= l_(k, ii) * rhs[k];
    }
    rhs[ii] = s / l_(ii, ii);
  }
  return rhs;
}

LuFactor::LuFactor(const RealMatrix& a) : lu_(a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("lu: matrix must be square");
  }
  const std::size_t n = a.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    perm_[i] = i;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::fabs(lu_(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      const double v = std::fabs(lu_(i, col));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) {
      throw std::runtime_error("lu: matrix is numerically singular");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(lu_(pivot, j), lu_(col, j));
      }
      std::swap(perm_[pivot], perm_[col]);
    }
    const double inv = 1.0 / lu_(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double factor = lu_(i, col) * inv;
      lu_(i, col) = factor;
      for (std::size_t j = col + 1; j < n; ++j) {
        lu_(i, j) -= factor * lu_(col, j);
      }
    }
  }
}

RealVector LuFactor::solve(RealVector rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) {
    throw std::invalid_argument("lu solve: rhs length mismatch");
  }
  RealVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rhs[perm_[i]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) {
      s -= lu_(i, k) * x[k];
    }
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) {
      s -= lu_(ii, k) * x[k];
    }
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

}  // namespace qopt
