#pragma once

// Matrix convex domains and membership oracles.

#include <string>
#include <variant>
#include <vector>

#include "ncgeom/core.hpp"
#include "ncgeom/ncmap.hpp"

namespace ncgeom {

template <class Real = double>
class Domain {
 public:
  struct RowBall {
    int d;
  };
  /// {X : Q(X) Q(X)^* < I}
  struct DQ {
    NcMap<Real> Q;
  };
  /// {X : Re L(X) < I}
  struct HL {
    NcMap<Real> L;
  };
  /// Max(B_d): {X : Re sum_j conj(w_j) X_j < I for all unit w}
  struct MaxBall {
    int d;
  };
  using Variant = std::variant<RowBall, DQ, HL, MaxBall>;

  static Domain row_ball(int d) {
    if (d < 1) throw invalid_input("row_ball: d must be positive");
    return Domain(RowBall{d});
  }

  static Domain max_ball(int d) {
    if (d < 1) throw invalid_input("max_ball: d must be positive");
    return Domain(MaxBall{d});
  }

  static Domain dq(NcMap<Real> q) {
    if (!q.valid()) throw invalid_input("dq: empty defining map");
    // Q(0) must be evaluable.
    (void)evaluate_block(q, MatrixTuple<Real>::zero(q.in_dim(), 1));
    return Domain(DQ{std::move(q)});
  }

  static Domain hl(NcMap<Real> l) {
    if (!l.valid()) throw invalid_input("hl: empty defining map");
    if (l.rows() != l.cols()) throw invalid_input("hl: L must be square (q x q)");
    const auto l0 = evaluate_block(l, MatrixTuple<Real>::zero(l.in_dim(), 1));
    if (!(linalg::lambda_max<Real>(linalg::hermitian_part<Real>(l0.data())) < Real(1)))
      throw invalid_input("hl: Re L(0) < I fails, so 0 is not interior");
    return Domain(HL{std::move(l)});
  }

  int dim() const {
    return std::visit(
        [](const auto& v) -> int {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, DQ>) return v.Q.in_dim();
          else if constexpr (std::is_same_v<V, HL>) return v.L.in_dim();
          else return v.d;
        },
        v_);
  }

  const Variant& variant() const { return v_; }
  bool is_row_ball() const { return std::holds_alternative<RowBall>(v_); }
  bool is_max_ball() const { return std::holds_alternative<MaxBall>(v_); }
  bool is_hl() const { return std::holds_alternative<HL>(v_); }

  /// Row ball and DQ share the defect-operator machinery.
  bool is_dq_type() const { return std::holds_alternative<RowBall>(v_) || std::holds_alternative<DQ>(v_); }

  /// The defining Q of a DQ-type domain (the coordinate row for the ball).
  NcMap<Real> defining_q() const {
    if (const auto* b = std::get_if<RowBall>(&v_)) return coordinate_row<Real>(b->d);
    if (const auto* q = std::get_if<DQ>(&v_)) return q->Q;
    throw invalid_input("domain has no defining Q");
  }

  const NcMap<Real>& defining_l() const {
    if (const auto* h = std::get_if<HL>(&v_)) return h->L;
    throw invalid_input("domain has no defining L");
  }

  std::string name() const {
    return std::visit(
        [](const auto& v) -> std::string {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, RowBall>) return "row_ball";
          else if constexpr (std::is_same_v<V, DQ>) return "dq";
          else if constexpr (std::is_same_v<V, HL>) return "hl";
          else return "max_ball";
        },
        v_);
  }

  template <class To>
  Domain<To> cast() const {
    return std::visit(
        [](const auto& v) -> Domain<To> {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, RowBall>) return Domain<To>::row_ball(v.d);
          else if constexpr (std::is_same_v<V, DQ>) return Domain<To>::dq(v.Q.template cast<To>());
          else if constexpr (std::is_same_v<V, HL>) return Domain<To>::hl(v.L.template cast<To>());
          else return Domain<To>::max_ball(v.d);
        },
        v_);
  }

 private:
  explicit Domain(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

enum class Membership { Interior, Boundary, Exterior };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Interior: return "Interior";
    case Membership::Boundary: return "Boundary";
    default: return "Exterior";
  }
}

template <class Real = double>
struct MembershipVerdict {
  Membership status;
  Real margin;
  std::vector<Complex<Real>> witness;  // MaxBall: the maximizing unit vector
};

template <class Real = double>
struct SupportResult {
  std::vector<Complex<Real>> w;
  Real value;
  int ascent_steps;
};

struct MaxBallOptions {
  int restarts = 64;
  std::uint64_t seed = 0x6d61785f62616c6cULL;
  double stationarity_tol = 1e-9;
  int max_ascent_steps = 500;
};

namespace detail {

/// Top eigenpair of Re sum_j conj(w_j) X_j.
template <class Real>
std::pair<Real, CVector<Real>> support_top(const MatrixTuple<Real>& x, const CVector<Real>& w) {
  CMatrix<Real> h = CMatrix<Real>::Zero(x.level(), x.level());
  for (int j = 0; j < x.dim(); ++j) h += std::conj(w(j)) * x[j];
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(linalg::hermitian_part<Real>(h));
  const auto last = x.level() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

}  // namespace detail

/// Lower bound on sup_{|w|=1} lambda_max(Re sum_j conj(w_j) X_j), with the
/// achieving w. Each start is refined by the fixed-point ascent
/// w <- c/|c|, c_j = v^* X_j v, which never decreases the value.
template <class Real>
SupportResult<Real> max_ball_support(const MatrixTuple<Real>& x, const MaxBallOptions& opt = {}) {
  if (opt.restarts < 1) throw invalid_input("max_ball_support: restarts must be >= 1");
  const int d = x.dim();
  Rng rng(opt.seed);
  std::vector<CVector<Real>> starts;
  for (int j = 0; j < d; ++j) starts.push_back(CVector<Real>::Unit(d, j));
  for (int r = 0; r < opt.restarts; ++r) {
    CMatrix<Real> g = random_gaussian_matrix<Real>(d, 1, rng);
    starts.push_back(g.col(0).normalized());
  }
  SupportResult<Real> best{{}, -std::numeric_limits<Real>::infinity(), 0};
  for (const auto& w0 : starts) {
    CVector<Real> w = w0;
    auto [val, v] = detail::support_top(x, w);
    int steps = 0;
    for (; steps < opt.max_ascent_steps; ++steps) {
      CVector<Real> c(d);
      for (int j = 0; j < d; ++j) c(j) = v.dot(x[j] * v);  // v^* X_j v
      const Real cn = c.norm();
      if (!(cn > 0)) break;
      CVector<Real> w_next = c / cn;
      auto [val_next, v_next] = detail::support_top(x, w_next);
      const bool improved = val_next > val;
      if (improved) {
        w = w_next;
        v = v_next;
      }
      if (!improved || val_next - val <= Real(opt.stationarity_tol)) {
        if (improved) val = val_next;
        break;
      }
      val = val_next;
    }
    if (val > best.value) {
      best.value = val;
      best.w.assign(w.data(), w.data() + d);
      best.ascent_steps = steps;
    }
  }
  return best;
}

inline constexpr double default_boundary_tol = 1e-8;

template <class Real>
Membership classify_margin(Real margin, Real boundary_tol) {
  if (std::abs(margin) <= boundary_tol) return Membership::Boundary;
  return margin > 0 ? Membership::Interior : Membership::Exterior;
}

/// Signed margin of the decisive spectral quantity from 1, and the verdict.
template <class Real>
MembershipVerdict<Real> contains(const Domain<Real>& dom, const MatrixTuple<Real>& x,
                                 Real boundary_tol = Real(default_boundary_tol), const MaxBallOptions& opt = {}) {
  if (x.dim() != dom.dim())
    throw invalid_input("point has " + std::to_string(x.dim()) + " coordinates, domain expects " +
                        std::to_string(dom.dim()));
  MembershipVerdict<Real> out{Membership::Interior, Real(0), {}};
  using D = Domain<Real>;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, typename D::RowBall>) {
          out.margin = Real(1) - row_norm(x);
        } else if constexpr (std::is_same_v<V, typename D::DQ>) {
          out.margin = Real(1) - linalg::op_norm<Real>(evaluate_block(v.Q, x).data());
        } else if constexpr (std::is_same_v<V, typename D::HL>) {
          const auto l = evaluate_block(v.L, x);
          out.margin = Real(1) - linalg::lambda_max<Real>(linalg::hermitian_part<Real>(l.data()));
        } else {
          auto s = max_ball_support(x, opt);
          out.margin = Real(1) - s.value;
          out.witness = std::move(s.w);
        }
      },
      dom.variant());
  out.status = classify_margin(out.margin, boundary_tol);
  return out;
}

/// r X coordinatewise, r in (0, 1].
template <class Real>
MatrixTuple<Real> radial_scale(const MatrixTuple<Real>& x, Real r) {
  if (!(r > 0 && r <= 1)) throw invalid_input("radial_scale: r must lie in (0, 1]");
  return r * x;
}

/// sup{t >= 0 : tX interior}, by doubling and bisection; `cap` when the ray
/// never leaves. Assumes 0 is interior, so the set of such t is an interval.
template <class Real>
Real radial_exit(const Domain<Real>& dom, const MatrixTuple<Real>& x, Real cap = Real(1e6)) {
  auto inside = [&](Real t) { return contains(dom, t * x, Real(0)).margin > 0; };
  Real lo = 0, hi = 1;
  while (inside(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > cap) return cap;
  }
  for (int k = 0; k < 80 && hi - lo > precision<Real>::epsilon() * hi; ++k) {
    const Real mid = (lo + hi) / 2;
    (inside(mid) ? lo : hi) = mid;
  }
  return lo;
}

/// The boundary point on the ray through x (x must be nonzero).
template <class Real>
MatrixTuple<Real> radial_boundary_point(const Domain<Real>& dom, const MatrixTuple<Real>& x) {
  if (dom.is_row_ball()) return (Real(1) / row_norm(x)) * x;
  return radial_exit(dom, x) * x;
}

/// A random interior point at level n: a random direction scaled to a
/// uniform fraction (at most max_fraction) of the radial exit distance.
/// Rays that stay inside past `ray_cap` (half-planes) are cut there.
template <class Real>
MatrixTuple<Real> sample_interior(const Domain<Real>& dom, Eigen::Index n, Rng& rng, Real max_fraction = Real(0.95),
                                  Real ray_cap = Real(8)) {
  if (!(max_fraction > 0 && max_fraction < 1)) throw invalid_input("sample_interior: max_fraction must lie in (0,1)");
  if (dom.is_row_ball()) return random_tuple<Real>(dom.dim(), n, max_fraction, rng);
  const MatrixTuple<Real> dir = random_tuple<Real>(dom.dim(), n, Real(0.5), rng);
  const Real t = radial_exit(dom, dir, ray_cap);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return (t * max_fraction * Real(1.0 - u(rng))) * dir;
}

}  // namespace ncgeom
