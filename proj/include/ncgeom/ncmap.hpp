#pragma once

// Symbolic nc maps and their evaluation. Every map has an input arity d and
// an output shape p x q; tuple-valued maps are the 1 x k row shape, so a
// value at level n is always a (p*n) x (q*n) block matrix.

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncgeom/core.hpp"
#include "ncgeom/polynomial.hpp"

namespace ncgeom {

template <class Real = double>
class NcMap {
 public:
  struct Polynomial {
    std::vector<FreePolynomial<Real>> outputs;
  };
  struct MatrixPoly {
    int p;
    int q;
    std::vector<std::vector<FreePolynomial<Real>>> grid;  // p rows of q entries
  };
  struct Mobius {
    std::vector<Complex<Real>> a;
  };
  struct Compose {
    NcMap outer;
    NcMap inner;
  };
  struct Affine {
    std::vector<std::pair<Complex<Real>, NcMap>> terms;
  };
  using Variant = std::variant<Polynomial, MatrixPoly, Mobius, Compose, Affine>;

  NcMap() = default;

  static NcMap polynomial(std::vector<FreePolynomial<Real>> outputs) {
    if (outputs.empty()) throw invalid_input("polynomial map needs at least one output");
    const int d = outputs.front().alphabet();
    for (const auto& p : outputs)
      if (p.alphabet() != d) throw invalid_input("polynomial outputs use different alphabets");
    const int k = static_cast<int>(outputs.size());
    return NcMap(Polynomial{std::move(outputs)}, d, 1, k, false);
  }

  static NcMap matrix_poly(int p, int q, std::vector<std::vector<FreePolynomial<Real>>> grid) {
    if (p < 1 || q < 1) throw invalid_input("matrix polynomial needs p, q >= 1");
    if (static_cast<int>(grid.size()) != p) throw invalid_input("matrix polynomial grid must have p rows");
    const int d = grid.front().empty() ? 0 : grid.front().front().alphabet();
    for (const auto& row : grid) {
      if (static_cast<int>(row.size()) != q) throw invalid_input("matrix polynomial grid rows must have q entries");
      for (const auto& e : row)
        if (e.alphabet() != d) throw invalid_input("matrix polynomial entries use different alphabets");
    }
    return NcMap(MatrixPoly{p, q, std::move(grid)}, d, p, q, true);
  }

  static NcMap mobius(std::vector<Complex<Real>> a) {
    if (a.empty()) throw invalid_input("Mobius parameter must be nonempty");
    Real n2 = 0;
    for (const auto& v : a) n2 += std::norm(v);
    if (!(n2 < 1)) throw invalid_input("Mobius parameter must lie strictly inside the unit ball");
    const int d = static_cast<int>(a.size());
    return NcMap(Mobius{std::move(a)}, d, 1, d, false);
  }

  static NcMap compose(NcMap outer, NcMap inner) {
    if (!inner.is_tuple_valued()) throw invalid_input("inner map of a composition must be tuple-valued");
    if (inner.out_dim() != outer.in_dim())
      throw invalid_input("composition shape mismatch: inner has " + std::to_string(inner.out_dim()) +
                          " outputs, outer expects " + std::to_string(outer.in_dim()));
    const int d = inner.in_dim(), p = outer.rows(), q = outer.cols();
    const bool mv = outer.matrix_valued_;
    return NcMap(Compose{std::move(outer), std::move(inner)}, d, p, q, mv);
  }

  static NcMap affine(std::vector<std::pair<Complex<Real>, NcMap>> terms) {
    if (terms.empty()) throw invalid_input("affine combination needs at least one term");
    const auto& f = terms.front().second;
    for (const auto& [w, m] : terms)
      if (m.in_dim() != f.in_dim() || m.rows() != f.rows() || m.cols() != f.cols() ||
          m.matrix_valued_ != f.matrix_valued_)
        throw invalid_input("affine combination terms have mismatched shapes");
    const int d = f.in_dim(), p = f.rows(), q = f.cols();
    const bool mv = f.matrix_valued_;
    return NcMap(Affine{std::move(terms)}, d, p, q, mv);
  }

  int in_dim() const { return d_; }
  int rows() const { return p_; }
  int cols() const { return q_; }
  bool is_tuple_valued() const { return !matrix_valued_; }
  int out_dim() const { return q_; }
  const Variant& variant() const { return node().v; }
  bool valid() const { return static_cast<bool>(node_); }

  template <class To>
  NcMap<To> cast() const {
    return std::visit(
        [&](const auto& v) -> NcMap<To> {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, Polynomial>) {
            std::vector<FreePolynomial<To>> o;
            for (const auto& p : v.outputs) o.push_back(p.template cast<To>());
            return NcMap<To>::polynomial(std::move(o));
          } else if constexpr (std::is_same_v<V, MatrixPoly>) {
            std::vector<std::vector<FreePolynomial<To>>> g;
            for (const auto& row : v.grid) {
              g.emplace_back();
              for (const auto& e : row) g.back().push_back(e.template cast<To>());
            }
            return NcMap<To>::matrix_poly(v.p, v.q, std::move(g));
          } else if constexpr (std::is_same_v<V, Mobius>) {
            std::vector<Complex<To>> a;
            for (const auto& x : v.a) a.emplace_back(To(x.real()), To(x.imag()));
            return NcMap<To>::mobius(std::move(a));
          } else if constexpr (std::is_same_v<V, Compose>) {
            return NcMap<To>::compose(v.outer.template cast<To>(), v.inner.template cast<To>());
          } else {
            std::vector<std::pair<Complex<To>, NcMap<To>>> t;
            for (const auto& [w, m] : v.terms)
              t.emplace_back(Complex<To>(To(w.real()), To(w.imag())), m.template cast<To>());
            return NcMap<To>::affine(std::move(t));
          }
        },
        node().v);
  }

  /// Identity of the node, used for memoizing shared subtrees.
  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Variant v;
  };

  template <class>
  friend class NcMap;

  NcMap(Variant v, int d, int p, int q, bool matrix_valued)
      : node_(std::make_shared<const Node>(Node{std::move(v)})), d_(d), p_(p), q_(q), matrix_valued_(matrix_valued) {
    if (d_ < 1) throw invalid_input("nc map input arity must be positive");
  }

  const Node& node() const {
    if (!node_) throw invalid_input("use of an empty NcMap");
    return *node_;
  }

  std::shared_ptr<const Node> node_;
  int d_ = 0;
  int p_ = 0;
  int q_ = 0;
  bool matrix_valued_ = false;
};

// ---------------------------------------------------------------------------
// Constructors for common maps

/// Z -> Z on d coordinates.
template <class Real = double>
NcMap<Real> identity_map(int d) {
  std::vector<FreePolynomial<Real>> o;
  for (int j = 0; j < d; ++j) o.push_back(FreePolynomial<Real>::coordinate(d, j));
  return NcMap<Real>::polynomial(std::move(o));
}

/// Z'_k = sum_j M(k,j) Z_j (+ c_k).
template <class Real>
NcMap<Real> linear_map(const CMatrix<Real>& m, const std::vector<Complex<Real>>& c = {}) {
  const int k = static_cast<int>(m.rows()), d = static_cast<int>(m.cols());
  std::vector<FreePolynomial<Real>> o;
  for (int i = 0; i < k; ++i) {
    FreePolynomial<Real> p(d);
    for (int j = 0; j < d; ++j)
      if (m(i, j) != Complex<Real>(0)) p.add_term({j}, m(i, j));
    if (!c.empty()) p.add_term({}, c.at(static_cast<std::size_t>(i)));
    o.push_back(std::move(p));
  }
  return NcMap<Real>::polynomial(std::move(o));
}

/// The 1 x d coordinate row (x1 ... xd); D_Q for this Q is the row ball.
template <class Real = double>
NcMap<Real> coordinate_row(int d) {
  std::vector<std::vector<FreePolynomial<Real>>> g(1);
  for (int j = 0; j < d; ++j) g[0].push_back(FreePolynomial<Real>::coordinate(d, j));
  return NcMap<Real>::matrix_poly(1, d, std::move(g));
}

template <class Real>
NcMap<Real> scaled(const NcMap<Real>& f, Complex<Real> c) {
  return NcMap<Real>::affine({{c, f}});
}

/// Z -> c f(Z) + (1 - c) g(Z) and the like.
template <class Real>
NcMap<Real> combine(Complex<Real> a, const NcMap<Real>& f, Complex<Real> b, const NcMap<Real>& g) {
  return NcMap<Real>::affine({{a, f}, {b, g}});
}

/// f o f o ... o f (k times); k = 0 is the identity. The chain shares its
/// subtrees, so evaluation memoizes the partial iterates.
template <class Real>
NcMap<Real> iterate_map(const NcMap<Real>& f, int k) {
  if (k < 0) throw invalid_input("iterate_map: k must be >= 0");
  if (!f.is_tuple_valued() || f.out_dim() != f.in_dim()) throw invalid_input("iterate_map needs a self-map shape");
  NcMap<Real> out = identity_map<Real>(f.in_dim());
  for (int i = 0; i < k; ++i) out = i == 0 ? f : NcMap<Real>::compose(f, out);
  return out;
}

template <class Real>
std::string describe(const NcMap<Real>& f) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using M = NcMap<Real>;
        using V = std::decay_t<decltype(v)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<V, typename M::Polynomial>) {
          os << "poly(";
          for (std::size_t i = 0; i < v.outputs.size(); ++i) os << (i ? "; " : "") << to_string(v.outputs[i]);
          os << ")";
        } else if constexpr (std::is_same_v<V, typename M::MatrixPoly>) {
          os << "matrix_poly[" << v.p << "x" << v.q << "](";
          for (int i = 0; i < v.p; ++i)
            for (int j = 0; j < v.q; ++j) os << ((i || j) ? ", " : "") << to_string(v.grid[i][j]);
          os << ")";
        } else if constexpr (std::is_same_v<V, typename M::Mobius>) {
          os << "mobius(";
          for (std::size_t i = 0; i < v.a.size(); ++i)
            os << (i ? ", " : "") << detail::format_number(double(v.a[i].real()))
               << (v.a[i].imag() != 0 ? "+" + detail::format_number(double(v.a[i].imag())) + "i" : "");
          os << ")";
        } else if constexpr (std::is_same_v<V, typename M::Compose>) {
          os << describe(v.outer) << " o " << describe(v.inner);
        } else {
          os << "affine(";
          for (std::size_t i = 0; i < v.terms.size(); ++i) {
            const auto& w = v.terms[i].first;
            os << (i ? " + " : "") << "(" << detail::format_number(double(w.real()));
            if (w.imag() != 0) os << "+" << detail::format_number(double(w.imag())) << "i";
            os << ")*[" << describe(v.terms[i].second) << "]";
          }
          os << ")";
        }
        return os.str();
      },
      f.variant());
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

template <class Real>
using EvalMemo = std::map<const void*, CMatrix<Real>>;

/// Value of f at x as a (p*n) x (q*n) block matrix. The memo is keyed by
/// node identity and only valid for this one input x.
template <class Real>
CMatrix<Real> evaluate_node(const NcMap<Real>& f, const MatrixTuple<Real>& x, EvalMemo<Real>& memo,
                            WordCache<Real>& words) {
  if (x.dim() != f.in_dim())
    throw invalid_input("map expects " + std::to_string(f.in_dim()) + " coordinates, point has " +
                        std::to_string(x.dim()));
  if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
  using M = NcMap<Real>;
  const auto n = x.level();
  CMatrix<Real> out = std::visit(
      [&](const auto& v) -> CMatrix<Real> {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, typename M::Polynomial>) {
          CMatrix<Real> r(n, n * static_cast<Eigen::Index>(v.outputs.size()));
          for (std::size_t k = 0; k < v.outputs.size(); ++k)
            r.block(0, static_cast<Eigen::Index>(k) * n, n, n) = v.outputs[k].evaluate(x, words);
          return r;
        } else if constexpr (std::is_same_v<V, typename M::MatrixPoly>) {
          CMatrix<Real> r(v.p * n, v.q * n);
          for (int i = 0; i < v.p; ++i)
            for (int j = 0; j < v.q; ++j) r.block(i * n, j * n, n, n) = v.grid[i][j].evaluate(x, words);
          return r;
        } else if constexpr (std::is_same_v<V, typename M::Mobius>) {
          // Phi_a(X)_k = a_k I - s sum_j R X_j S_jk, R = (I - sum_j conj(a_j) X_j)^{-1},
          // s = sqrt(1 - |a|^2), S = (I_d - a^* a)^{1/2}.
          const int d = static_cast<int>(v.a.size());
          CVector<Real> a(d);
          for (int j = 0; j < d; ++j) a(j) = v.a[j];
          const Real s = std::sqrt(Real(1) - a.squaredNorm());
          const CMatrix<Real> big_s =
              linalg::hermitian_sqrt<Real>(linalg::identity<Real>(d) - a.conjugate() * a.transpose());
          CMatrix<Real> xa = CMatrix<Real>::Identity(n, n);
          for (int j = 0; j < d; ++j) xa -= std::conj(a(j)) * x[j];
          const CMatrix<Real> res = linalg::guarded_inverse<Real>(xa, "Mobius resolvent I - X a^*");
          std::vector<CMatrix<Real>> rx;
          for (int j = 0; j < d; ++j) rx.push_back(res * x[j]);
          CMatrix<Real> r(n, n * d);
          for (int k = 0; k < d; ++k) {
            CMatrix<Real> acc = a(k) * CMatrix<Real>::Identity(n, n);
            for (int j = 0; j < d; ++j) acc -= (s * big_s(j, k)) * rx[j];
            r.block(0, k * n, n, n) = acc;
          }
          return r;
        } else if constexpr (std::is_same_v<V, typename M::Compose>) {
          const CMatrix<Real> inner = evaluate_node(v.inner, x, memo, words);
          const auto y = MatrixTuple<Real>::from_row(inner, v.inner.out_dim());
          EvalMemo<Real> fresh;
          WordCache<Real> fresh_words(y);
          return evaluate_node(v.outer, y, fresh, fresh_words);
        } else {
          CMatrix<Real> r = CMatrix<Real>::Zero(f.rows() * n, f.cols() * n);
          for (const auto& [w, m] : v.terms) r.noalias() += w * evaluate_node(m, x, memo, words);
          return r;
        }
      },
      f.variant());
  if (!out.allFinite()) throw numerical_failure("map evaluation produced non-finite values");
  memo.emplace(f.id(), out);
  return out;
}

}  // namespace detail

/// Value of f at x as a RectBlock (works for every map shape).
template <class Real>
RectBlock<Real> evaluate_block(const NcMap<Real>& f, const MatrixTuple<Real>& x) {
  detail::EvalMemo<Real> memo;
  WordCache<Real> words(x);
  CMatrix<Real> v = detail::evaluate_node(f, x, memo, words);
  return RectBlock<Real>(f.rows(), f.cols(), x.level(), x.level(), std::move(v));
}

/// Value of a tuple-valued map.
template <class Real>
MatrixTuple<Real> evaluate(const NcMap<Real>& f, const MatrixTuple<Real>& x) {
  if (!f.is_tuple_valued()) throw invalid_input("evaluate: map is matrix-valued; use evaluate_block");
  detail::EvalMemo<Real> memo;
  WordCache<Real> words(x);
  return MatrixTuple<Real>::from_row(detail::evaluate_node(f, x, memo, words), f.out_dim());
}

/// Upper triangular block point [[X, Z], [0, Y]].
template <class Real>
MatrixTuple<Real> block_point(const MatrixTuple<Real>& x, const MatrixTuple<Real>& y, const BlockTuple<Real>& z) {
  if (x.dim() != y.dim() || z.dim() != x.dim()) throw invalid_input("block_point: coordinate counts differ");
  if (z.rows() != x.level() || z.cols() != y.level())
    throw invalid_input("block_point: direction must be n_X x n_Y");
  const auto n = x.level(), m = y.level();
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < x.dim(); ++j) {
    CMatrix<Real> b = CMatrix<Real>::Zero(n + m, n + m);
    b.topLeftCorner(n, n) = x[j];
    b.topRightCorner(n, m) = z[j];
    b.bottomRightCorner(m, m) = y[j];
    c.push_back(std::move(b));
  }
  return MatrixTuple<Real>(std::move(c));
}

/// Delta f(X,Y)(Z): the (1,2) corner of f at the block point, per entry of
/// the output shape. Exact up to rounding.
template <class Real>
RectBlock<Real> diff_differential(const NcMap<Real>& f, const MatrixTuple<Real>& x, const MatrixTuple<Real>& y,
                                  const BlockTuple<Real>& z) {
  const auto n = x.level(), m = y.level();
  const RectBlock<Real> full = evaluate_block(f, block_point(x, y, z));
  CMatrix<Real> out(f.rows() * n, f.cols() * m);
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) out.block(i * n, j * m, n, m) = full.block(i, j).topRightCorner(n, m);
  return RectBlock<Real>(f.rows(), f.cols(), n, m, std::move(out));
}

/// Delta f(X,X)(Z), the derivative of f at X in the direction Z.
template <class Real>
RectBlock<Real> derivative(const NcMap<Real>& f, const MatrixTuple<Real>& x, const BlockTuple<Real>& z) {
  return diff_differential(f, x, x, z);
}

/// Split a 1 x k RectBlock (tuple-valued output) into its coordinates.
template <class Real>
BlockTuple<Real> as_tuple(const RectBlock<Real>& r) {
  if (r.rows() != 1) throw invalid_input("as_tuple: value is not a row");
  std::vector<CMatrix<Real>> c;
  for (int j = 0; j < r.cols(); ++j) c.push_back(r.block(0, j));
  return BlockTuple<Real>(std::move(c));
}

}  // namespace ncgeom
