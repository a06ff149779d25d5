#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qopt/qlinalg.hpp"

namespace qopt::test {

/// Deterministic generator for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(eng_() >> 11) * 0x1.0p-53);
  }

  double gauss() {
    const double u1 = 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  Quaternion quaternion(double scale = 1.0) {
    return {scale * gauss(), scale * gauss(), scale * gauss(), scale * gauss()};
  }

  QVector qvector(std::size_t n, double scale = 1.0) {
    QVector v(n);
    for (std::size_t t = 0; t < n; ++t) {
      v.set(t, quaternion(scale));
    }
    return v;
  }

  QMatrix qmatrix(std::size_t rows, std::size_t cols, double scale = 1.0) {
    QMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        m.set(i, j, quaternion(scale));
      }
    }
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

inline double max_abs_diff(const Quaternion& x, const Quaternion& y) {
  return std::max({std::fabs(x.a - y.a), std::fabs(x.b - y.b), std::fabs(x.c - y.c),
                   std::fabs(x.d - y.d)});
}

inline double max_abs_diff(const QVector& x, const QVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("max_abs_diff: size mismatch");
  }
  double m = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    m = std::max(m, max_abs_diff(x[t], y[t]));
  }
  return m;
}

inline double max_abs_diff(const QMatrix& x, const QMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      m = std::max(m, max_abs_diff(x.at(i, j), y.at(i, j)));
    }
  }
  return m;
}

inline double max_abs_diff(const RealVector& x, const RealVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("max_abs_diff: size mismatch");
  }
  double m = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    m = std::max(m, std::fabs(x[t] - y[t]));
  }
  return m;
}

/// Plain Gaussian elimination with partial pivoting, kept independent of the
/// library factorizations so oracle solves do not share code with the paths
/// they check.
inline RealVector oracle_solve(RealMatrix a, RealVector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) {
    throw std::invalid_argument("oracle_solve: shape mismatch");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
    }
    if (a(piv, col) == 0.0) {
      throw std::runtime_error("oracle_solve: singular system");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  RealVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

/// Real vector of length 4n viewed as a quaternion vector with real entries.
inline QVector embed_real(const RealVector& v) {
  QVector out(v.size());
  for (std::size_t t = 0; t < v.size(); ++t) {
    out.set(t, Quaternion(v[t]));
  }
  return out;
}

}  // namespace qopt::test
