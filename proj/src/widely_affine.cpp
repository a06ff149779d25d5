#include "qopt/widely_affine.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qopt {

namespace {

void check_shapes(const QMatrix& a1, const QMatrix& a2, const QMatrix& a3, const QMatrix& a4,
                  const QVector& b) {
  const std::size_t p = a1.rows();
  const std::size_t n = a1.cols();
  const bool ok = a2.rows() == p && a3.rows() == p && a4.rows() == p && a2.cols() == n &&
                  a3.cols() == n && a4.cols() == n && b.size() == p;
  if (!ok) {
    throw std::invalid_argument("widely affine map: the four matrices must share shape p x n "
                                "and b must have length p");
  }
}

// Writes the four component planes of a p x n quaternion block into the real
// 4p x 4n matrix at block row r, block column c.
void place_component_blocks(RealMatrix& ar, const QMatrix& block, std::size_t col_block) {
  const std::size_t p = block.rows();
  const std::size_t n = block.cols();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion v = block.at(i, j);
      ar(0 * p + i, col_block * n + j) = v.a;
      ar(1 * p + i, col_block * n + j) = v.b;
      ar(2 * p + i, col_block * n + j) = v.c;
      ar(3 * p + i, col_block * n + j) = v.d;
    }
  }
}

}  // namespace

WidelyAffineMap::WidelyAffineMap(QMatrix a1_, QMatrix a2_, QMatrix a3_, QMatrix a4_, QVector b_)
    : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)),
      b(std::move(b_)) {
  check_shapes(a1, a2, a3, a4, b);
}

WidelyAffineMap WidelyAffineMap::strictly_affine(QMatrix a, QVector b) {
  const std::size_t p = a.rows();
  const std::size_t n = a.cols();
  return {std::move(a), QMatrix::zero(p, n), QMatrix::zero(p, n), QMatrix::zero(p, n),
          std::move(b)};
}

WidelyAffineMap WidelyAffineMap::identity(std::size_t n) {
  return strictly_affine(QMatrix::identity(n), QVector::zero(n));
}

QVector apply_linear(const WidelyAffineMap& m, const QVector& q) {
  if (q.size() != m.in_dim()) {
    throw std::invalid_argument("widely affine apply: input length mismatch");
  }
  QVector out = matvec(m.a1, q);
  out = out + matvec(m.a2, involution(q, CanonicalUnit::i));
  out = out + matvec(m.a3, involution(q, CanonicalUnit::j));
  out = out + matvec(m.a4, involution(q, CanonicalUnit::k));
  return out;
}

QVector apply(const WidelyAffineMap& m, const QVector& q) { return apply_linear(m, q) - m.b; }

AugRealSystem to_aug_real_matrix(const WidelyAffineMap& m) {
  const std::size_t p = m.out_dim();
  const std::size_t n = m.in_dim();
  // Column blocks of the real matrix come from the right-multiplied combinations
  // of the four quaternion coefficient matrices.
  const QMatrix sum_all = m.a1 + m.a2 + m.a3 + m.a4;
  const QMatrix t1 = sum_all;
  const QMatrix t2 = scale_right(m.a1 + m.a2 - m.a3 - m.a4, Quaternion::unit_i());
  const QMatrix t3 = scale_right(m.a1 - m.a2 + m.a3 - m.a4, Quaternion::unit_j());
  const QMatrix t4 = scale_right(m.a1 - m.a2 - m.a3 + m.a4, Quaternion::unit_k());
  AugRealSystem out;
  out.a = RealMatrix(4 * p, 4 * n);
  place_component_blocks(out.a, t1, 0);
  place_component_blocks(out.a, t2, 1);
  place_component_blocks(out.a, t3, 2);
  place_component_blocks(out.a, t4, 3);
  out.b = to_aug_real(m.b).data;
  return out;
}

QMatrix to_aug_quat_matrix(const WidelyAffineMap& m) {
  const std::size_t p = m.out_dim();
  const std::size_t n = m.in_dim();
  QMatrix out(4 * p, 4 * n);
  const QMatrix a1i = involution(m.a1, CanonicalUnit::i);
  const QMatrix a2i = involution(m.a2, CanonicalUnit::i);
  const QMatrix a3i = involution(m.a3, CanonicalUnit::i);
  const QMatrix a4i = involution(m.a4, CanonicalUnit::i);
  const QMatrix a1j = involution(m.a1, CanonicalUnit::j);
  const QMatrix a2j = involution(m.a2, CanonicalUnit::j);
  const QMatrix a3j = involution(m.a3, CanonicalUnit::j);
  const QMatrix a4j = involution(m.a4, CanonicalUnit::j);
  const QMatrix a1k = involution(m.a1, CanonicalUnit::k);
  const QMatrix a2k = involution(m.a2, CanonicalUnit::k);
  const QMatrix a3k = involution(m.a3, CanonicalUnit::k);
  const QMatrix a4k = involution(m.a4, CanonicalUnit::k);

  set_block(out, 0, 0, m.a1);
  set_block(out, 0, n, m.a2);
  set_block(out, 0, 2 * n, m.a3);
  set_block(out, 0, 3 * n, m.a4);

  set_block(out, p, 0, a2i);
  set_block(out, p, n, a1i);
  set_block(out, p, 2 * n, a4i);
  set_block(out, p, 3 * n, a3i);

  set_block(out, 2 * p, 0, a3j);
  set_block(out, 2 * p, n, a4j);
  set_block(out, 2 * p, 2 * n, a1j);
  set_block(out, 2 * p, 3 * n, a2j);

  set_block(out, 3 * p, 0, a4k);
  set_block(out, 3 * p, n, a3k);
  set_block(out, 3 * p, 2 * n, a2k);
  set_block(out, 3 * p, 3 * n, a1k);
  return out;
}

WidelyAffineMap from_aug_real_matrix(const RealMatrix& ar, const RealVector& br) {
  if (ar.rows() % 4 != 0 || ar.cols() % 4 != 0 || br.size() != ar.rows()) {
    throw std::invalid_argument("from_aug_real_matrix: dimensions must be divisible by 4 and "
                                "rhs must match the row count");
  }
  const std::size_t p = ar.rows() / 4;
  const std::size_t n = ar.cols() / 4;

  // Reassemble the quaternion-valued column combinations from the real blocks,
  // then split them back into the four coefficient matrices.
  std::array<QMatrix, 4> tilde;
  for (std::size_t cb = 0; cb < 4; ++cb) {
    QMatrix t(p, n);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        t.set(i, j,
              {ar(0 * p + i, cb * n + j), ar(1 * p + i, cb * n + j), ar(2 * p + i, cb * n + j),
               ar(3 * p + i, cb * n + j)});
      }
    }
    tilde[cb] = std::move(t);
  }
  const QMatrix t2i = scale_right(tilde[1], Quaternion::unit_i());
  const QMatrix t3j = scale_right(tilde[2], Quaternion::unit_j());
  const QMatrix t4k = scale_right(tilde[3], Quaternion::unit_k());
  const QMatrix a1 = 0.25 * (tilde[0] - t2i - t3j - t4k);
  const QMatrix a2 = 0.25 * (tilde[0] - t2i + t3j + t4k);
  const QMatrix a3 = 0.25 * (tilde[0] + t2i - t3j + t4k);
  const QMatrix a4 = 0.25 * (tilde[0] + t2i + t3j - t4k);

  // The stacked real rhs maps back through component stacking; blocks 2-4 of
  // its involution stack are consistent by construction for real input.
  const QVector b = from_aug_real(AugRealVector{br});
  return {a1, a2, a3, a4, b};
}

QVector adjoint_apply(const WidelyAffineMap& m, const QVector& lam) {
  if (lam.size() != m.out_dim()) {
    throw std::invalid_argument("widely affine adjoint: multiplier length mismatch");
  }
  QVector out = matvec(hermitian(m.a1), lam);
  out = out + involution(matvec(hermitian(m.a2), lam), CanonicalUnit::i);
  out = out + involution(matvec(hermitian(m.a3), lam), CanonicalUnit::j);
  out = out + involution(matvec(hermitian(m.a4), lam), CanonicalUnit::k);
  return out;
}

void save_widely_affine(const WidelyAffineMap& m, const std::string& manifest_path) {
  namespace fs = std::filesystem;
  const fs::path manifest(manifest_path);
  const fs::path dir = manifest.parent_path();
  const std::string stem = manifest.stem().string();
  const std::array<std::string, 5> names = {stem + "_A1.csv", stem + "_A2.csv", stem + "_A3.csv",
                                            stem + "_A4.csv", stem + "_b.csv"};
  save_qmatrix_csv((dir / names[0]).string(), m.a1);
  save_qmatrix_csv((dir / names[1]).string(), m.a2);
  save_qmatrix_csv((dir / names[2]).string(), m.a3);
  save_qmatrix_csv((dir / names[3]).string(), m.a4);
  save_qvector_csv((dir / names[4]).string(), m.b);

  nlohmann::json j;
  j["p"] = m.out_dim();
  j["n"] = m.in_dim();
  j["paths"] = {{"A1", names[0]}, {"A2", names[1]}, {"A3", names[2]}, {"A4", names[3]},
                {"b", names[4]}};
  std::ofstream out(manifest_path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + manifest_path);
  }
  out << j.dump(2) << "\n";
}

WidelyAffineMap load_widely_affine(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + manifest_path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(manifest_path + ": invalid JSON manifest: " + e.what());
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  const auto resolve = [&](const std::string& key) {
    return (dir / j.at("paths").at(key).get<std::string>()).string();
  };
  WidelyAffineMap m(load_qmatrix_csv(resolve("A1")), load_qmatrix_csv(resolve("A2")),
                    load_qmatrix_csv(resolve("A3")), load_qmatrix_csv(resolve("A4")),
                    load_qvector_csv(resolve("b")));
  if (m.out_dim() != j.at("p").get<std::size_t>() || m.in_dim() != j.at("n").get<std::size_t>()) {
    throw std::runtime_error(manifest_path + ": manifest dimensions do not match stored files");
  }
  return m;
}

}  // namespace qopt
