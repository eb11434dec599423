#pragma once

// Matrix tuples: points of the nc universe at a fixed level, together with
// the structural operations (direct sums, ampliations, compressions) that
// define nc sets and nc functions.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ncgeom/errors.hpp"
#include "ncgeom/linalg.hpp"

namespace ncgeom {

using Rng = std::mt19937_64;

/// A d-tuple of rows x cols complex matrices. Square tuples are points
/// (see MatrixTuple); rectangular ones are the off-diagonal directions Z
/// that feed the difference-differential operator.
template <class Real = double>
class BlockTuple {
 public:
  using matrix_type = CMatrix<Real>;

  BlockTuple() = default;

  explicit BlockTuple(std::vector<matrix_type> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw invalid_input("tuple must have at least one coordinate");
    const auto r = coords_.front().rows();
    const auto c = coords_.front().cols();
    for (const auto& m : coords_) {
      if (m.rows() != r || m.cols() != c)
        throw invalid_input("tuple coordinates must share one shape");
      if (!m.allFinite()) throw numerical_failure("tuple has non-finite entries");
    }
  }

  static BlockTuple zero(int d, Eigen::Index rows, Eigen::Index cols) {
    return BlockTuple(std::vector<matrix_type>(static_cast<std::size_t>(d),
                                               matrix_type::Zero(rows, cols)));
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  Eigen::Index rows() const { return coords_.empty() ? 0 : coords_.front().rows(); }
  Eigen::Index cols() const { return coords_.empty() ? 0 : coords_.front().cols(); }

  const matrix_type& operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
  const std::vector<matrix_type>& coords() const { return coords_; }

  /// The row block [Z_1 ... Z_d] of size rows x (d*cols).
  matrix_type row() const {
    matrix_type out(rows(), cols() * dim());
    for (int j = 0; j < dim(); ++j) out.block(0, j * cols(), rows(), cols()) = coords_[j];
    return out;
  }

  template <class To>
  BlockTuple<To> cast() const {
    std::vector<CMatrix<To>> c;
    c.reserve(coords_.size());
    for (const auto& m : coords_) c.push_back(m.template cast<Complex<To>>());
    return BlockTuple<To>(std::move(c));
  }

 protected:
  std::vector<matrix_type> coords_;
};

/// A point of the nc universe at level n: d square n x n complex matrices.
template <class Real = double>
class MatrixTuple : public BlockTuple<Real> {
  using base = BlockTuple<Real>;

 public:
  using typename base::matrix_type;

  MatrixTuple() = default;

  explicit MatrixTuple(std::vector<matrix_type> coords) : base(std::move(coords)) {
    if (this->rows() != this->cols()) throw invalid_input("point coordinates must be square");
    if (this->rows() < 1) throw invalid_input("point level must be positive");
  }

  static MatrixTuple zero(int d, Eigen::Index n) {
    if (d < 1 || n < 1) throw invalid_input("zero tuple needs d >= 1 and n >= 1");
    return MatrixTuple(std::vector<matrix_type>(static_cast<std::size_t>(d), matrix_type::Zero(n, n)));
  }

  /// Level-1 point from a vector in C^d.
  static MatrixTuple scalar(const std::vector<Complex<Real>>& z) {
    std::vector<matrix_type> c;
    for (const auto& v : z) c.push_back(matrix_type::Constant(1, 1, v));
    return MatrixTuple(std::move(c));
  }

  /// Split an n x (n*d) row block into a tuple.
  static MatrixTuple from_row(const matrix_type& row, int d) {
    if (d < 1 || row.cols() != row.rows() * d) throw invalid_input("row block does not split into d squares");
    const auto n = row.rows();
    std::vector<matrix_type> c;
    for (int j = 0; j < d; ++j) c.push_back(row.block(0, j * n, n, n));
    return MatrixTuple(std::move(c));
  }

  Eigen::Index level() const { return this->rows(); }

  /// Scalar entries of a level-1 point.
  std::vector<Complex<Real>> scalars() const {
    if (level() != 1) throw invalid_input("scalars() requires a level-1 point");
    std::vector<Complex<Real>> out;
    for (const auto& m : this->coords_) out.push_back(m(0, 0));
    return out;
  }

  template <class To>
  MatrixTuple<To> cast() const {
    std::vector<CMatrix<To>> c;
    for (const auto& m : this->coords_) c.push_back(m.template cast<Complex<To>>());
    return MatrixTuple<To>(std::move(c));
  }
};

template <class Real>
MatrixTuple<Real> operator+(const MatrixTuple<Real>& x, const MatrixTuple<Real>& y) {
  if (x.dim() != y.dim() || x.level() != y.level()) throw invalid_input("tuple shapes differ in sum");
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < x.dim(); ++j) c.push_back(x[j] + y[j]);
  return MatrixTuple<Real>(std::move(c));
}

template <class Real>
MatrixTuple<Real> operator-(const MatrixTuple<Real>& x, const MatrixTuple<Real>& y) {
  if (x.dim() != y.dim() || x.level() != y.level()) throw invalid_input("tuple shapes differ in difference");
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < x.dim(); ++j) c.push_back(x[j] - y[j]);
  return MatrixTuple<Real>(std::move(c));
}

template <class Real>
MatrixTuple<Real> operator*(Complex<Real> s, const MatrixTuple<Real>& x) {
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(s * m);
  return MatrixTuple<Real>(std::move(c));
}

template <class Real>
MatrixTuple<Real> operator*(Real s, const MatrixTuple<Real>& x) {
  return Complex<Real>(s) * x;
}

template <class Real>
BlockTuple<Real> operator*(Complex<Real> s, const BlockTuple<Real>& x) {
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(s * m);
  return BlockTuple<Real>(std::move(c));
}

template <class Real>
BlockTuple<Real> operator+(const BlockTuple<Real>& x, const BlockTuple<Real>& y) {
  if (x.dim() != y.dim() || x.rows() != y.rows() || x.cols() != y.cols())
    throw invalid_input("block tuple shapes differ in sum");
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < x.dim(); ++j) c.push_back(x[j] + y[j]);
  return BlockTuple<Real>(std::move(c));
}

/// max over coordinates and entries of |x - y|.
template <class Real>
Real max_abs_diff(const BlockTuple<Real>& x, const BlockTuple<Real>& y) {
  if (x.dim() != y.dim() || x.rows() != y.rows() || x.cols() != y.cols())
    throw invalid_input("tuple shapes differ");
  Real out = 0;
  for (int j = 0; j < x.dim(); ++j) out = std::max(out, linalg::max_abs<Real>(x[j] - y[j]));
  return out;
}

// ---------------------------------------------------------------------------
// Isometries and rectangular blocks

/// An n x k matrix V with V^* V = I_k (validated to 1e-12).
template <class Real = double>
class Isometry {
 public:
  static constexpr double validation_tol = 1e-12;

  explicit Isometry(CMatrix<Real> v) : v_(std::move(v)) {
    if (v_.rows() < v_.cols() || v_.cols() < 1) throw invalid_input("isometry must be n x k with n >= k >= 1");
    const Real defect = linalg::max_abs<Real>(v_.adjoint() * v_ - linalg::identity<Real>(v_.cols()));
    if (!(defect <= Real(validation_tol))) throw invalid_input("matrix is not an isometry");
  }

  /// Embedding of C^k as the coordinates offset..offset+k-1 of C^n.
  static Isometry embedding(Eigen::Index n, Eigen::Index k, Eigen::Index offset = 0) {
    if (offset + k > n) throw invalid_input("embedding does not fit");
    CMatrix<Real> v = CMatrix<Real>::Zero(n, k);
    v.block(offset, 0, k, k).setIdentity();
    return Isometry(std::move(v));
  }

  /// V_t = (sqrt(t) I_n ; sqrt(1-t) I_n), so V_t^*(X (+) Y)V_t = tX + (1-t)Y.
  static Isometry convex_pair(Real t, Eigen::Index n) {
    if (!(t >= 0 && t <= 1)) throw invalid_input("convex_pair needs t in [0,1]");
    CMatrix<Real> v = CMatrix<Real>::Zero(2 * n, n);
    v.topRows(n).diagonal().setConstant(Complex<Real>(std::sqrt(t)));
    v.bottomRows(n).diagonal().setConstant(Complex<Real>(std::sqrt(Real(1) - t)));
    return Isometry(std::move(v));
  }

  Eigen::Index rows() const { return v_.rows(); }
  Eigen::Index cols() const { return v_.cols(); }
  const CMatrix<Real>& matrix() const { return v_; }

 private:
  CMatrix<Real> v_;
};

/// A value Q(Z) of a p x q matrix-valued nc map: data has (p*row_level) x
/// (q*col_level) entries, block (i,j) holding the (i,j) entry of Q.
template <class Real = double>
class RectBlock {
 public:
  RectBlock(int p, int q, Eigen::Index row_level, Eigen::Index col_level, CMatrix<Real> data)
      : p_(p), q_(q), row_level_(row_level), col_level_(col_level), data_(std::move(data)) {
    if (p < 1 || q < 1) throw invalid_input("RectBlock needs p, q >= 1");
    if (data_.rows() != p * row_level || data_.cols() != q * col_level)
      throw invalid_input("RectBlock data dimensions do not match p*level x q*level");
  }

  int rows() const { return p_; }
  int cols() const { return q_; }
  Eigen::Index level() const { return row_level_; }
  Eigen::Index row_level() const { return row_level_; }
  Eigen::Index col_level() const { return col_level_; }
  const CMatrix<Real>& data() const { return data_; }

  auto block(int i, int j) const {
    return data_.block(i * row_level_, j * col_level_, row_level_, col_level_);
  }

 private:
  int p_;
  int q_;
  Eigen::Index row_level_;
  Eigen::Index col_level_;
  CMatrix<Real> data_;
};

// ---------------------------------------------------------------------------
// Structural operations

template <class Real>
MatrixTuple<Real> direct_sum(const MatrixTuple<Real>& x, const MatrixTuple<Real>& y) {
  if (x.dim() != y.dim()) throw invalid_input("direct_sum: coordinate counts differ");
  const auto n = x.level();
  const auto m = y.level();
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < x.dim(); ++j) {
    CMatrix<Real> b = CMatrix<Real>::Zero(n + m, n + m);
    b.topLeftCorner(n, n) = x[j];
    b.bottomRightCorner(m, m) = y[j];
    c.push_back(std::move(b));
  }
  return MatrixTuple<Real>(std::move(c));
}

/// I_k (x) X: k diagonal copies of X.
template <class Real>
MatrixTuple<Real> ampliate(const MatrixTuple<Real>& x, Eigen::Index k) {
  if (k < 1) throw invalid_input("ampliate: k must be >= 1");
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(linalg::kron<Real>(linalg::identity<Real>(k), m));
  return MatrixTuple<Real>(std::move(c));
}

/// X (x) I_k, the other tensor ordering; equal to ampliate(X,k) after
/// conjugation by canonical_shuffle(k, n).
template <class Real>
MatrixTuple<Real> ampliate_right(const MatrixTuple<Real>& x, Eigen::Index k) {
  if (k < 1) throw invalid_input("ampliate_right: k must be >= 1");
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(linalg::kron<Real>(m, linalg::identity<Real>(k)));
  return MatrixTuple<Real>(std::move(c));
}

/// Permutation P on C^k (x) C^n with P (A (x) B) P^T = B (x) A for A k x k,
/// B n x n.
template <class Real = double>
CMatrix<Real> canonical_shuffle(Eigen::Index k, Eigen::Index n) {
  CMatrix<Real> p = CMatrix<Real>::Zero(k * n, k * n);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < n; ++j) p(j * k + i, i * n + j) = Complex<Real>(1);
  return p;
}

/// V^* X V.
template <class Real>
MatrixTuple<Real> compress(const MatrixTuple<Real>& x, const Isometry<Real>& v) {
  if (v.rows() != x.level()) throw invalid_input("compress: isometry rows must equal the level");
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(v.matrix().adjoint() * m * v.matrix());
  return MatrixTuple<Real>(std::move(c));
}

/// V^* Z W for a rectangular direction Z.
template <class Real>
BlockTuple<Real> compress(const BlockTuple<Real>& z, const Isometry<Real>& v, const Isometry<Real>& w) {
  if (v.rows() != z.rows() || w.rows() != z.cols()) throw invalid_input("compress: isometry shapes do not fit");
  std::vector<CMatrix<Real>> c;
  for (const auto& m : z.coords()) c.push_back(v.matrix().adjoint() * m * w.matrix());
  return BlockTuple<Real>(std::move(c));
}

/// Conjugate every coordinate by an invertible S: S^{-1} X S.
template <class Real>
MatrixTuple<Real> similarity(const MatrixTuple<Real>& x, const CMatrix<Real>& s) {
  const CMatrix<Real> s_inv = linalg::guarded_inverse<Real>(s, "similarity");
  std::vector<CMatrix<Real>> c;
  for (const auto& m : x.coords()) c.push_back(s_inv * m * s);
  return MatrixTuple<Real>(std::move(c));
}

/// Operator norm of the row [X_1 ... X_d].
template <class Real>
Real row_norm(const BlockTuple<Real>& x) {
  CMatrix<Real> gram = CMatrix<Real>::Zero(x.rows(), x.rows());
  for (const auto& m : x.coords()) gram.noalias() += m * m.adjoint();
  return std::sqrt(std::max(linalg::lambda_max<Real>(gram), Real(0)));
}

/// Action of a d x d unitary on the coordinate index: X'_k = sum_j U_jk X_j,
/// i.e. the row block is multiplied on the right by U (x) I_n.
template <class Real>
MatrixTuple<Real> rotate_coordinates(const MatrixTuple<Real>& x, const CMatrix<Real>& u) {
  if (u.rows() != x.dim() || u.cols() != x.dim()) throw invalid_input("rotation must be d x d");
  std::vector<CMatrix<Real>> c;
  for (int k = 0; k < x.dim(); ++k) {
    CMatrix<Real> acc = CMatrix<Real>::Zero(x.level(), x.level());
    for (int j = 0; j < x.dim(); ++j) acc += u(j, k) * x[j];
    c.push_back(std::move(acc));
  }
  return MatrixTuple<Real>(std::move(c));
}

/// A d x d unitary U whose first column is conj(zeta)/|zeta|, so that the
/// row vector zeta U is |zeta| e_1.
template <class Real>
CMatrix<Real> rotation_to_first_axis(const std::vector<Complex<Real>>& zeta) {
  const auto d = static_cast<Eigen::Index>(zeta.size());
  CVector<Real> col(d);
  for (Eigen::Index j = 0; j < d; ++j) col(j) = std::conj(zeta[static_cast<std::size_t>(j)]);
  const Real nrm = col.norm();
  if (!(nrm > 0)) throw invalid_input("rotation_to_first_axis: zero vector");
  col /= nrm;
  // Complete to an orthonormal basis with Householder QR of [col | I].
  CMatrix<Real> seed(d, d + 1);
  seed.col(0) = col;
  seed.rightCols(d) = linalg::identity<Real>(d);
  Eigen::HouseholderQR<CMatrix<Real>> qr(seed);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(d, d);
  // q0 equals col up to a unimodular factor.
  q.col(0) = col;
  return q;
}

// ---------------------------------------------------------------------------
// Random generation (deterministic for a fixed seed)

template <class Real>
CMatrix<Real> random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix<Real> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex<Real>(Real(g(rng)), Real(g(rng)));
  return m;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
template <class Real>
CMatrix<Real> random_unitary(Eigen::Index n, Rng& rng) {
  CMatrix<Real> a = random_gaussian_matrix<Real>(n, n, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(a);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real a_ii = std::abs(r(i, i));
    if (a_ii > 0) q.col(i) *= r(i, i) / a_ii;
  }
  return q;
}

template <class Real>
Isometry<Real> random_isometry(Eigen::Index n, Eigen::Index k, Rng& rng) {
  CMatrix<Real> u = random_unitary<Real>(n, rng);
  return Isometry<Real>(u.leftCols(k));
}

/// Random tuple with row norm radius * u, u uniform in (0,1].
template <class Real>
MatrixTuple<Real> random_tuple(int d, Eigen::Index n, Real radius, Rng& rng) {
  if (!(radius > 0 && radius < 1)) throw invalid_input("random_tuple: radius must lie in (0,1)");
  if (d < 1 || n < 1) throw invalid_input("random_tuple: d and n must be positive");
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < d; ++j) c.push_back(random_gaussian_matrix<Real>(n, n, rng));
  MatrixTuple<Real> x(std::move(c));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Real target = radius * Real(1.0 - u(rng));  // (0, radius]
  const Real nrm = row_norm(x);
  Real scale = target / nrm;
  MatrixTuple<Real> out = scale * x;
  // Rescaling can round the norm above target by an ulp.
  while (row_norm(out) > radius) {
    scale *= Real(1) - precision<Real>::epsilon() * 4;
    out = scale * x;
  }
  return out;
}

template <class Real = double>
MatrixTuple<Real> random_tuple(int d, Eigen::Index n, Real radius, std::uint64_t seed) {
  Rng rng(seed);
  return random_tuple<Real>(d, n, radius, rng);
}

/// Random rectangular direction with Gaussian entries of the given scale.
template <class Real>
BlockTuple<Real> random_direction(int d, Eigen::Index rows, Eigen::Index cols, Real scale, Rng& rng) {
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < d; ++j) c.push_back(scale * random_gaussian_matrix<Real>(rows, cols, rng));
  return BlockTuple<Real>(std::move(c));
}

}  // namespace ncgeom
