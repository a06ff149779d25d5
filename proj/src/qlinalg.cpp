#include "qopt/qlinalg.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qopt {

namespace {

void check_same_size(const QVector& x, const QVector& y, const char* what) {
  if (x.size() != y.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  }
}

void check_same_shape(const QMatrix& x, const QMatrix& y, const char* what) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

QVector operator+(const QVector& x, const QVector& y) {
  check_same_size(x, y, "qvector add");
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, x[t] + y[t]);
  }
  return out;
}

QVector operator-(const QVector& x, const QVector& y) {
  check_same_size(x, y, "qvector sub");
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, x[t] - y[t]);
  }
  return out;
}

QVector operator-(const QVector& x) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, -x[t]);
  }
  return out;
}

QVector operator*(double s, const QVector& x) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, x[t] * s);
  }
  return out;
}

QVector scale_left(const Quaternion& mu, const QVector& x) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, mu * x[t]);
  }
  return out;
}

QVector scale_right(const QVector& x, const Quaternion& mu) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, x[t] * mu);
  }
  return out;
}

QVector conj(const QVector& x) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, conj(x[t]));
  }
  return out;
}

QVector involution(const QVector& x, CanonicalUnit axis) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, involution(x[t], axis));
  }
  return out;
}

QVector real_part(const QVector& x) {
  QVector out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    out.set(t, Quaternion(x[t].a));
  }
  return out;
}

Quaternion dot_h(const QVector& x, const QVector& y) {
  check_same_size(x, y, "qvector dot");
  Quaternion s;
  for (std::size_t t = 0; t < x.size(); ++t) {
    s += conj(x[t]) * y[t];
  }
  return s;
}

double inner_product(const QVector& x, const QVector& y) { return dot_h(x, y).a; }

double norm2(const QVector& x) {
  double s = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    s += norm_sq(x[t]);
  }
  return std::sqrt(s);
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, Quaternion::one());
  }
  return m;
}

QMatrix operator+(const QMatrix& x, const QMatrix& y) {
  check_same_shape(x, y, "qmatrix add");
  QMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out.set(i, j, x.at(i, j) + y.at(i, j));
    }
  }
  return out;
}

QMatrix operator-(const QMatrix& x, const QMatrix& y) {
  check_same_shape(x, y, "qmatrix sub");
  QMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out.set(i, j, x.at(i, j) - y.at(i, j));
    }
  }
  return out;
}

QMatrix operator*(double s, const QMatrix& x) {
  QMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out.set(i, j, x.at(i, j) * s);
    }
  }
  return out;
}

QMatrix scale_left(const Quaternion& mu, const QMatrix& x) {
  QMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out.set(i, j, mu * x.at(i, j));
    }
  }
  return out;
}

QMatrix scale_right(const QMatrix& x, const Quaternion& mu) {
  QMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out.set(i, j, x.at(i, j) * mu);
    }
  }
  return out;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("qmatrix matmul: inner dimensions do not agree");
  }
  QMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Quaternion s;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        s += a.at(i, k) * b.at(k, j);
      }
      out.set(i, j, s);
    }
  }
  return out;
}

QVector matvec(const QMatrix& a, const QVector& x) {
  if (a.cols() != x.size()) {
    throw std::invalid_argument("qmatrix matvec: dimension mismatch");
  }
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const double* ma = a.plane_a().data();
  const double* mb = a.plane_b().data();
  const double* mc = a.plane_c().data();
  const double* md = a.plane_d().data();
  const double* xa = x.plane_a().data();
  const double* xb = x.plane_b().data();
  const double* xc = x.plane_c().data();
  const double* xd = x.plane_d().data();
  QVector out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t base = i * cols;
    double sa = 0.0, sb = 0.0, sc = 0.0, sd = 0.0;
    for (std::size_t k = 0; k < cols; ++k) {
      const double pa = ma[base + k], pb = mb[base + k], pc = mc[base + k], pd = md[base + k];
      const double qa = xa[k], qb = xb[k], qc = xc[k], qd = xd[k];
      sa += pa * qa - pb * qb - pc * qc - pd * qd;
      sb += pa * qb + pb * qa + pc * qd - pd * qc;
      sc += pa * qc - pb * qd + pc * qa + pd * qb;
      sd += pa * qd + pb * qc - pc * qb + pd * qa;
    }
    out.plane_a()[i] = sa;
    out.plane_b()[i] = sb;
    out.plane_c()[i] = sc;
    out.plane_d()[i] = sd;
  }
  return out;
}

QMatrix hermitian(const QMatrix& a) {
  QMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.set(j, i, conj(a.at(i, j)));
    }
  }
  return out;
}

QMatrix conj(const QMatrix& a) {
  QMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.set(i, j, conj(a.at(i, j)));
    }
  }
  return out;
}

QMatrix involution(const QMatrix& a, CanonicalUnit axis) {
  QMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.set(i, j, involution(a.at(i, j), axis));
    }
  }
  return out;
}

QVector column(const QMatrix& a, std::size_t j) {
  QVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    out.set(i, a.at(i, j));
  }
  return out;
}

void set_block(QMatrix& dst, std::size_t i0, std::size_t j0, const QMatrix& src) {
  if (i0 + src.rows() > dst.rows() || j0 + src.cols() > dst.cols()) {
    throw std::invalid_argument("qmatrix set_block: block exceeds destination");
  }
  for (std::size_t i = 0; i < src.rows(); ++i) {
    for (std::size_t j = 0; j < src.cols(); ++j) {
      dst.set(i0 + i, j0 + j, src.at(i, j));
    }
  }
}

AugRealVector to_aug_real(const QVector& q) {
  const std::size_t n = q.size();
  AugRealVector out;
  out.data.reserve(4 * n);
  out.data.insert(out.data.end(), q.plane_a().begin(), q.plane_a().end());
  out.data.insert(out.data.end(), q.plane_b().begin(), q.plane_b().end());
  out.data.insert(out.data.end(), q.plane_c().begin(), q.plane_c().end());
  out.data.insert(out.data.end(), q.plane_d().begin(), q.plane_d().end());
  return out;
}

QVector from_aug_real(const AugRealVector& x) {
  if (x.data.size() % 4 != 0) {
    throw std::invalid_argument("from_aug_real: length not divisible by 4");
  }
  const std::size_t n = x.data.size() / 4;
  QVector out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.set(t, {x.data[t], x.data[n + t], x.data[2 * n + t], x.data[3 * n + t]});
  }
  return out;
}

AugQuatVector to_aug_quat(const QVector& q) {
  const std::size_t n = q.size();
  AugQuatVector out{QVector(4 * n)};
  for (std::size_t t = 0; t < n; ++t) {
    const Quaternion v = q[t];
    out.data.set(t, v);
    out.data.set(n + t, involution_i(v));
    out.data.set(2 * n + t, involution_j(v));
    out.data.set(3 * n + t, involution_k(v));
  }
  return out;
}

QVector project_first_block(const AugQuatVector& h) {
  if (h.data.size() % 4 != 0) {
    throw std::invalid_argument("project_first_block: length not divisible by 4");
  }
  const std::size_t n = h.data.size() / 4;
  QVector out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.set(t, h.data[t]);
  }
  return out;
}

QMatrix j_matrix(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("j_matrix: n must be positive");
  }
  // Block pattern: rows stack (q, q^i, q^j, q^k) applied to (qa; qb; qc; qd).
  static constexpr double kSigns[4][3] = {
      {1.0, 1.0, 1.0}, {1.0, -1.0, -1.0}, {-1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}};
  QMatrix out(4 * n, 4 * n);
  for (std::size_t block = 0; block < 4; ++block) {
    for (std::size_t t = 0; t < n; ++t) {
      out.set(block * n + t, t, Quaternion::one());
      out.set(block * n + t, n + t, Quaternion::unit_i() * kSigns[block][0]);
      out.set(block * n + t, 2 * n + t, Quaternion::unit_j() * kSigns[block][1]);
      out.set(block * n + t, 3 * n + t, Quaternion::unit_k() * kSigns[block][2]);
    }
  }
  return out;
}

double inner_product_aug_real(const AugRealVector& x, const AugRealVector& y) {
  return dot(x.data, y.data);
}

double inner_product_aug_quat(const AugQuatVector& x, const AugQuatVector& y) {
  return 0.25 * dot_h(x.data, y.data).a;
}

namespace {

void write_entry(std::FILE* f, std::size_t i, std::size_t j, const Quaternion& v) {
  std::fprintf(f, "%zu,%zu,%.17g,%.17g,%.17g,%.17g\n", i, j, v.a, v.b, v.c, v.d);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const char* what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw std::runtime_error(msg.str());
}

}  // namespace

void save_qmatrix_csv(const std::string& path, const QMatrix& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  std::fprintf(f, "%zu,%zu\n", m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      write_entry(f, i, j, m.at(i, j));
    }
  }
  std::fclose(f);
}

QMatrix load_qmatrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    parse_fail(path, 1, "missing dimension header");
  }
  ++lineno;
  std::size_t rows = 0;
  std::size_t cols = 0;
  {
    std::istringstream hs(line);
    char comma = 0;
    if (!(hs >> rows >> comma >> cols) || comma != ',') {
      parse_fail(path, lineno, "malformed dimension header, expected rows,cols");
    }
  }
  QMatrix out(rows, cols);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t i = 0;
    std::size_t j = 0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    char c1, c2, c3, c4, c5;
    std::istringstream ls(line);
    if (!(ls >> i >> c1 >> j >> c2 >> a >> c3 >> b >> c4 >> c >> c5 >> d) || c1 != ',' ||
        c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',') {
      parse_fail(path, lineno, "malformed entry, expected i,j,a,b,c,d");
    }
    if (i >= rows || j >= cols) {
      parse_fail(path, lineno, "entry index out of declared bounds");
    }
    out.set(i, j, {a, b, c, d});
  }
  return out;
}

void save_qvector_csv(const std::string& path, const QVector& v) {
  QMatrix m(v.size(), 1);
  for (std::size_t t = 0; t < v.size(); ++t) {
    m.set(t, 0, v[t]);
  }
  save_qmatrix_csv(path, m);
}

QVector load_qvector_csv(const std::string& path) {
  const QMatrix m = load_qmatrix_csv(path);
  if (m.cols() != 1) {
    throw std::runtime_error(path + ": expected a single-column vector file");
  }
  return column(m, 0);
}

}  // namespace qopt
