#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <stdexcept>

namespace qopt {

/// Quaternion scalar q = a + i b + j c + k d with Hamilton's rules
/// i^2 = j^2 = k^2 = ijk = -1, ij = -ji = k.
struct Quaternion {
  double a{0.0};
  double b{0.0};
  double c{0.0};
  double d{0.0};

  constexpr Quaternion() = default;
  constexpr Quaternion(double a_, double b_ = 0.0, double c_ = 0.0, double d_ = 0.0)
      : a(a_), b(b_), c(c_), d(d_) {}

  static constexpr Quaternion zero() { return {}; }
  static constexpr Quaternion one() { return {1.0}; }
  static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return a; }
  constexpr bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
  }
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
constexpr Quaternion operator-(const Quaternion& q) { return {-q.a, -q.b, -q.c, -q.d}; }
constexpr Quaternion operator*(Quaternion q, double s) { return q *= s; }
constexpr Quaternion operator*(double s, Quaternion q) { return q *= s; }
constexpr Quaternion operator/(Quaternion q, double s) { return q *= (1.0 / s); }

/// Hamilton product (noncommutative).
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
          p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
          p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
          p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a};
}

constexpr Quaternion conj(const Quaternion& q) { return {q.a, -q.b, -q.c, -q.d}; }

constexpr double norm_sq(const Quaternion& q) {
  return q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d;
}

inline double modulus(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

/// Multiplicative inverse conj(q)/|q|^2. Throws for q = 0.
inline Quaternion inverse(const Quaternion& q) {
  const double n2 = norm_sq(q);
  if (n2 == 0.0) {
    throw std::domain_error("quaternion inverse: division by zero quaternion");
  }
  return conj(q) / n2;
}

/// q^mu = mu q mu^{-1}, evaluated as mu q conj(mu)/|mu|^2. Throws for mu = 0.
inline Quaternion rotate(const Quaternion& q, const Quaternion& mu) {
  const double n2 = norm_sq(mu);
  if (n2 == 0.0) {
    throw std::domain_error("quaternion rotate: zero rotation axis");
  }
  return (mu * q * conj(mu)) / n2;
}

// Canonical involutions q^i, q^j, q^k (sign flips on two imaginary components).
constexpr Quaternion involution_i(const Quaternion& q) { return {q.a, q.b, -q.c, -q.d}; }
constexpr Quaternion involution_j(const Quaternion& q) { return {q.a, -q.b, q.c, -q.d}; }
constexpr Quaternion involution_k(const Quaternion& q) { return {q.a, -q.b, -q.c, q.d}; }

/// Axis label for the canonical involution family {identity, (.)^i, (.)^j, (.)^k}.
enum class CanonicalUnit { one, i, j, k };

constexpr Quaternion canonical_unit(CanonicalUnit axis) {
  switch (axis) {
    case CanonicalUnit::one:
      return Quaternion::one();
    case CanonicalUnit::i:
      return Quaternion::unit_i();
    case CanonicalUnit::j:
      return Quaternion::unit_j();
    case CanonicalUnit::k:
      return Quaternion::unit_k();
  }
  return Quaternion::one();
}

constexpr Quaternion involution(const Quaternion& q, CanonicalUnit axis) {
  switch (axis) {
    case CanonicalUnit::one:
      return q;
    case CanonicalUnit::i:
      return involution_i(q);
    case CanonicalUnit::j:
      return involution_j(q);
    case CanonicalUnit::k:
      return involution_k(q);
  }
  return q;
}

/// Recovers (a, b, c, d) from the quadruple (q, q^i, q^j, q^k).
/// Inputs are assumed consistent; for arbitrary inputs the real part of each
/// defining combination is returned.
inline std::array<double, 4> components_from_involutions(const Quaternion& q,
                                                         const Quaternion& qi,
                                                         const Quaternion& qj,
                                                         const Quaternion& qk) {
  const Quaternion sa = q + qi + qj + qk;
  const Quaternion sb = q + qi - qj - qk;
  const Quaternion sc = q - qi + qj - qk;
  const Quaternion sd = q - qi - qj + qk;
  return {0.25 * sa.a,
          (Quaternion::unit_i() * sb * -0.25).a,
          (Quaternion::unit_j() * sc * -0.25).a,
          (Quaternion::unit_k() * sd * -0.25).a};
}

}  // namespace qopt
