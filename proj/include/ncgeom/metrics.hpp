#pragma once

// The nc Lempert function delta(X,Y)(Z), the two-point function
// delta~(X,Y) = delta(X,Y)(X-Y), the Finsler seminorm rho_X and the chain
// and path distance estimators.

#include <limits>
#include <string>

#include "ncgeom/domains.hpp"

namespace ncgeom {

enum class MetricMethod { ClosedForm, Bisection, Chain, PathIntegral };

inline const char* to_string(MetricMethod m) {
  switch (m) {
    case MetricMethod::ClosedForm: return "closed_form";
    case MetricMethod::Bisection: return "bisection";
    case MetricMethod::Chain: return "chain";
    default: return "path_integral";
  }
}

template <class Real = double>
struct MetricResult {
  Real value = 0;
  MetricMethod method = MetricMethod::ClosedForm;
  int iterations = 0;
  Real achieved_tol = 0;
  bool ill_conditioned = false;   // some base point has margin < 1e-10
  Real cross_check_error = 0;     // delta~: |Q(X)-Q(Y) form - Delta form|
};

struct OracleOptions {
  double tol = 1e-12;
  double s_cap = 1e6;
  int max_steps = 200;
};

inline constexpr double ill_conditioned_margin = 1e-10;

namespace detail {

/// Throws unless x is strictly inside dom; returns the margin.
template <class Real>
Real require_interior(const Domain<Real>& dom, const MatrixTuple<Real>& x, const char* what) {
  const auto v = contains(dom, x, Real(0));
  if (!(v.margin > 0))
    throw domain_violation(std::string(what) + " is not an interior point (margin " +
                           std::to_string(static_cast<double>(v.margin)) + ")");
  return v.margin;
}

/// Left normalizer: D_{Q(X)}^{-1/2} or (I - Re L(X))^{-1/2}.
template <class Real>
CMatrix<Real> left_normalizer(const Domain<Real>& dom, const MatrixTuple<Real>& x) {
  if (dom.is_dq_type())
    return linalg::hermitian_inv_sqrt<Real>(linalg::left_defect<Real>(evaluate_block(dom.defining_q(), x).data()));
  const CMatrix<Real> l = evaluate_block(dom.defining_l(), x).data();
  return linalg::hermitian_inv_sqrt<Real>(linalg::identity<Real>(l.rows()) - linalg::hermitian_part<Real>(l));
}

/// Right normalizer: D_{Q(Y)^*}^{-1/2} or (I - Re L(Y))^{-1/2}.
template <class Real>
CMatrix<Real> right_normalizer(const Domain<Real>& dom, const MatrixTuple<Real>& y) {
  if (dom.is_dq_type())
    return linalg::hermitian_inv_sqrt<Real>(linalg::right_defect<Real>(evaluate_block(dom.defining_q(), y).data()));
  return left_normalizer(dom, y);
}

template <class Real>
const NcMap<Real>& defining_map(const Domain<Real>& dom, NcMap<Real>& storage) {
  if (dom.is_dq_type()) {
    storage = dom.defining_q();
    return storage;
  }
  return dom.defining_l();
}

template <class Real>
Real closed_form_factor(const Domain<Real>& dom) {
  return dom.is_hl() ? Real(0.5) : Real(1);
}

template <class Real>
bool is_zero(const BlockTuple<Real>& z) {
  for (const auto& m : z.coords())
    if (!m.isZero(0)) return false;
  return true;
}

}  // namespace detail

/// delta(X,Y)(Z) by bisection on the definition: the reciprocal of the
/// supremum of s with [[X, sZ], [0, Y]] inside the domain.
template <class Real>
MetricResult<Real> lempert_delta_oracle(const Domain<Real>& dom, const MatrixTuple<Real>& x,
                                        const MatrixTuple<Real>& y, const BlockTuple<Real>& z,
                                        const OracleOptions& opt = {}) {
  if (!(opt.tol > 0)) throw invalid_input("lempert_delta_oracle: tol must be positive");
  MetricResult<Real> r;
  r.method = MetricMethod::Bisection;
  const Real mx = detail::require_interior(dom, x, "X");
  const Real my = detail::require_interior(dom, y, "Y");
  r.ill_conditioned = std::min(mx, my) < Real(ill_conditioned_margin);
  if (detail::is_zero(z)) return r;
  auto inside = [&](Real s) {
    return contains(dom, block_point(x, y, Complex<Real>(s) * z), Real(0)).margin > 0;
  };
  Real lo = 0, hi = 1;
  int it = 0;
  while (inside(hi)) {
    lo = hi;
    hi *= 2;
    ++it;
    if (hi > Real(opt.s_cap)) {
      r.value = 0;
      r.iterations = it;
      return r;
    }
  }
  for (int k = 0; k < opt.max_steps; ++k, ++it) {
    if (lo > 0 && Real(1) / lo - Real(1) / hi <= Real(opt.tol)) break;
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    (inside(mid) ? lo : hi) = mid;
  }
  r.value = Real(2) / (lo + hi);
  r.achieved_tol = lo > 0 ? Real(1) / lo - Real(1) / hi : std::numeric_limits<Real>::infinity();
  r.iterations = it;
  return r;
}

/// delta(X,Y)(Z) for X at level n, Y at level m and Z a d-tuple of n x m
/// matrices. Closed form on the row ball, DQ and HL; MaxBall uses the oracle.
template <class Real>
MetricResult<Real> lempert_delta(const Domain<Real>& dom, const MatrixTuple<Real>& x, const MatrixTuple<Real>& y,
                                 const BlockTuple<Real>& z) {
  if (dom.is_max_ball()) return lempert_delta_oracle(dom, x, y, z);
  if (z.rows() != x.level() || z.cols() != y.level()) throw invalid_input("lempert_delta: Z must be n_X x n_Y");
  MetricResult<Real> r;
  const Real mx = detail::require_interior(dom, x, "X");
  const Real my = detail::require_interior(dom, y, "Y");
  r.ill_conditioned = std::min(mx, my) < Real(ill_conditioned_margin);
  NcMap<Real> storage;
  const auto& q = detail::defining_map(dom, storage);
  const CMatrix<Real> corner = diff_differential(q, x, y, z).data();
  const CMatrix<Real> m = detail::left_normalizer(dom, x) * corner * detail::right_normalizer(dom, y);
  r.value = detail::closed_form_factor(dom) * linalg::op_norm<Real>(m);
  return r;
}

/// delta~(X,Y) = delta(X,Y)(X - Y) for points of one level. On DQ-type and
/// HL domains the Q(X) - Q(Y) form is used and the Delta form is recorded
/// as a cross-check.
template <class Real>
MetricResult<Real> delta_tilde(const Domain<Real>& dom, const MatrixTuple<Real>& x, const MatrixTuple<Real>& y) {
  if (x.level() != y.level()) throw invalid_input("delta_tilde: points must share one level");
  const MatrixTuple<Real> diff = x - y;
  if (dom.is_max_ball()) return lempert_delta_oracle(dom, x, y, static_cast<const BlockTuple<Real>&>(diff));
  MetricResult<Real> r;
  const Real mx = detail::require_interior(dom, x, "X");
  const Real my = detail::require_interior(dom, y, "Y");
  r.ill_conditioned = std::min(mx, my) < Real(ill_conditioned_margin);
  NcMap<Real> storage;
  const auto& q = detail::defining_map(dom, storage);
  const CMatrix<Real> lx = detail::left_normalizer(dom, x);
  const CMatrix<Real> ry = detail::right_normalizer(dom, y);
  const CMatrix<Real> qdiff = evaluate_block(q, x).data() - evaluate_block(q, y).data();
  const Real c = detail::closed_form_factor(dom);
  r.value = c * linalg::op_norm<Real>(lx * qdiff * ry);
  const CMatrix<Real> corner = diff_differential(q, x, y, static_cast<const BlockTuple<Real>&>(diff)).data();
  r.cross_check_error = std::abs(c * linalg::op_norm<Real>(lx * corner * ry) - r.value);
  return r;
}

/// rho_X(Z) = delta(X,X)(Z).
template <class Real>
MetricResult<Real> finsler_seminorm(const Domain<Real>& dom, const MatrixTuple<Real>& x, const BlockTuple<Real>& z) {
  return lempert_delta(dom, x, x, z);
}

/// Upper estimate of the chain distance: sum of delta~ over uniform
/// subdivisions of the segment with 1, 2, 4, ..., max_points pieces,
/// minimized over the subdivisions.
template <class Real>
MetricResult<Real> chain_distance(const Domain<Real>& dom, const MatrixTuple<Real>& x, const MatrixTuple<Real>& y,
                                  int max_points = 256) {
  if (max_points < 1) throw invalid_input("chain_distance: max_points must be >= 1");
  if (x.level() != y.level()) throw invalid_input("chain_distance: points must share one level");
  MetricResult<Real> r;
  r.method = MetricMethod::Chain;
  r.value = std::numeric_limits<Real>::infinity();
  const MatrixTuple<Real> step = y - x;
  for (int k = 1; k <= max_points; k *= 2) {
    Real sum = 0;
    MatrixTuple<Real> prev = x;
    for (int i = 1; i <= k; ++i) {
      MatrixTuple<Real> next = i == k ? y : x + (Real(i) / Real(k)) * step;
      const auto d = delta_tilde(dom, prev, next);
      r.ill_conditioned = r.ill_conditioned || d.ill_conditioned;
      sum += d.value;
      prev = std::move(next);
    }
    if (sum < r.value) {
      r.value = sum;
      r.iterations = k;
    }
  }
  return r;
}

/// Upper estimate of the path distance: composite Simpson quadrature of
/// rho_{gamma(t)}(Y - X) along gamma(t) = (1-t)X + tY.
template <class Real>
MetricResult<Real> path_distance(const Domain<Real>& dom, const MatrixTuple<Real>& x, const MatrixTuple<Real>& y,
                                 int quad_points = 64) {
  if (quad_points < 2 || quad_points % 2 != 0) throw invalid_input("path_distance: quad_points must be even and >= 2");
  if (x.level() != y.level()) throw invalid_input("path_distance: points must share one level");
  MetricResult<Real> r;
  r.method = MetricMethod::PathIntegral;
  const MatrixTuple<Real> step = y - x;
  const BlockTuple<Real>& dir = step;
  Real acc = 0;
  for (int i = 0; i <= quad_points; ++i) {
    const Real t = Real(i) / Real(quad_points);
    const MatrixTuple<Real> g = i == quad_points ? y : x + t * step;
    const auto rho = finsler_seminorm(dom, g, dir);
    r.ill_conditioned = r.ill_conditioned || rho.ill_conditioned;
    const Real w = (i == 0 || i == quad_points) ? Real(1) : (i % 2 ? Real(4) : Real(2));
    acc += w * rho.value;
  }
  r.value = acc / (Real(3) * Real(quad_points));
  r.iterations = quad_points;
  return r;
}

}  // namespace ncgeom
