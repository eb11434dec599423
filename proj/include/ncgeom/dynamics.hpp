#pragma once

// Iteration of nc self-maps: orbits, Denjoy-Wolff limits, Earle-Hamilton
// fixed points, Wolff points of radial shrinkings, Cesaro averages,
// retractions and the Bedford dichotomy.

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ncgeom/metrics.hpp"

namespace ncgeom {

enum class IterationVerdict { ConvergedInterior, ConvergedBoundary, MaxIters };

inline const char* to_string(IterationVerdict v) {
  switch (v) {
    case IterationVerdict::ConvergedInterior: return "ConvergedInterior";
    case IterationVerdict::ConvergedBoundary: return "ConvergedBoundary";
    default: return "MaxIters";
  }
}

template <class Real = double>
struct IterationTrace {
  std::string map_id;
  MatrixTuple<Real> start;
  std::vector<MatrixTuple<Real>> points;          // x_0, x_1, ... (thinned by `thin`)
  std::vector<int> point_steps;                   // k of each stored point
  std::vector<Real> step_sizes;                   // max |x_{k+1} - x_k|
  std::vector<std::optional<Real>> step_deltas;   // delta~(x_k, x_{k+1}) when both are strictly interior
  std::vector<Real> margins;                      // margin of x_{k+1}
  IterationVerdict verdict = IterationVerdict::MaxIters;
  MatrixTuple<Real> limit;                        // last iterate
  int iterations = 0;
};

struct IterateOptions {
  double boundary_tol = 1e-8;
  bool record_deltas = true;
  int thin = 1;
};

/// x_{k+1} = F(x_k) until max|x_{k+1} - x_k| < tol or max_iter steps. Every
/// iterate is checked against the domain; leaving it is a hard error.
template <class Real>
IterationTrace<Real> iterate(const NcMap<Real>& f, const Domain<Real>& dom, const MatrixTuple<Real>& x0, int max_iter,
                             Real tol, const IterateOptions& opt = {}) {
  if (max_iter < 0) throw invalid_input("iterate: max_iter must be >= 0");
  if (opt.thin < 1) throw invalid_input("iterate: thin must be >= 1");
  const auto v0 = contains(dom, x0, Real(0));
  if (!(v0.margin > 0)) throw domain_violation("iterate: start point is not interior");
  IterationTrace<Real> tr;
  tr.map_id = describe(f);
  tr.start = x0;
  tr.points.push_back(x0);
  tr.point_steps.push_back(0);
  MatrixTuple<Real> x = x0;
  Real margin = v0.margin;
  int applied = 0;
  for (int k = 0; k < max_iter; ++k) {
    MatrixTuple<Real> y = evaluate(f, x);
    const auto v = contains(dom, y, Real(opt.boundary_tol));
    if (v.status == Membership::Exterior)
      throw domain_violation("iterate: step " + std::to_string(k + 1) + " left the domain (margin " +
                             std::to_string(static_cast<double>(v.margin)) + "); the map is not a self-map");
    const Real step = max_abs_diff<Real>(y, x);
    tr.step_sizes.push_back(step);
    tr.margins.push_back(v.margin);
    std::optional<Real> sd;
    if (opt.record_deltas && margin > 0 && v.margin > 0) {
      try {
        sd = delta_tilde(dom, x, y).value;
      } catch (const domain_violation&) {
        // defect below the floor: the pair is numerically on the boundary
      }
    }
    tr.step_deltas.push_back(sd);
    x = std::move(y);
    margin = v.margin;
    applied = k + 1;
    tr.iterations = applied;
    if ((k + 1) % opt.thin == 0) {
      tr.points.push_back(x);
      tr.point_steps.push_back(k + 1);
    }
    if (step < tol) {
      tr.verdict = margin <= Real(opt.boundary_tol) ? IterationVerdict::ConvergedBoundary
                                                    : IterationVerdict::ConvergedInterior;
      tr.iterations = k;
      break;
    }
  }
  if (tr.point_steps.back() != applied) {
    tr.points.push_back(x);
    tr.point_steps.push_back(applied);
  }
  tr.limit = x;
  return tr;
}

// ---------------------------------------------------------------------------
// Denjoy-Wolff

enum class DWClass { InteriorFixed, BoundaryDW };

inline const char* to_string(DWClass c) { return c == DWClass::InteriorFixed ? "InteriorFixed" : "BoundaryDW"; }

template <class Real = double>
struct DenjoyWolffReport {
  DWClass classification;
  MatrixTuple<Real> point;           // level 1
  std::vector<MatrixTuple<Real>> orbit_limits;
  Real limit_diameter;
  Real initial_diameter;
  int max_iterations_used;
};

struct DenjoyWolffOptions {
  int starts = 5;
  int max_iter = 20000;
  double boundary_proximity = 1e-6;
  double start_radius = 0.5;
  std::uint64_t seed = 0x64775f7374617274ULL;
};

namespace detail {

template <class Real>
Real diameter(const std::vector<MatrixTuple<Real>>& pts) {
  Real out = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) out = std::max(out, max_abs_diff<Real>(pts[i], pts[j]));
  return out;
}

template <class Real>
std::vector<MatrixTuple<Real>> level1_starts(const Domain<Real>& dom, int count, Real radius, std::uint64_t seed) {
  std::vector<MatrixTuple<Real>> s{MatrixTuple<Real>::zero(dom.dim(), 1)};
  Rng rng(seed);
  while (static_cast<int>(s.size()) < count) s.push_back(sample_interior(dom, 1, rng, radius));
  return s;
}

}  // namespace detail

/// Numerical Denjoy-Wolff classification from level-1 orbits. Any orbit
/// with an interior limit exhibits an interior fixed point; otherwise all
/// orbits must reach the boundary with a shrinking common diameter.
template <class Real>
DenjoyWolffReport<Real> denjoy_wolff_point(const NcMap<Real>& f, const Domain<Real>& dom, Real tol,
                                           const DenjoyWolffOptions& opt = {}) {
  if (opt.starts < 3) throw invalid_input("denjoy_wolff_point: need at least 3 starts");
  const auto starts = detail::level1_starts(dom, opt.starts, Real(opt.start_radius), opt.seed);
  DenjoyWolffReport<Real> rep{DWClass::BoundaryDW, {}, {}, 0, detail::diameter(starts), 0};
  IterateOptions io;
  io.record_deltas = false;
  bool all_converged = true;
  for (const auto& s : starts) {
    const auto tr = iterate(f, dom, s, opt.max_iter, tol, io);
    rep.max_iterations_used = std::max(rep.max_iterations_used, tr.iterations);
    rep.orbit_limits.push_back(tr.limit);
    const Real m = contains(dom, tr.limit, Real(0)).margin;
    if (tr.verdict != IterationVerdict::MaxIters && m > Real(opt.boundary_proximity)) {
      rep.classification = DWClass::InteriorFixed;
      rep.point = tr.limit;
      rep.limit_diameter = 0;
      return rep;
    }
    if (tr.verdict == IterationVerdict::MaxIters || m > Real(opt.boundary_proximity)) all_converged = false;
  }
  rep.limit_diameter = detail::diameter(rep.orbit_limits);
  if (!all_converged)
    throw numerical_failure("denjoy_wolff_point: inconclusive, orbits did not settle within " +
                            std::to_string(opt.max_iter) + " iterations");
  if (!(rep.limit_diameter < Real(opt.boundary_proximity) && rep.limit_diameter < rep.initial_diameter))
    throw numerical_failure("denjoy_wolff_point: inconclusive, boundary limits do not agree (diameter " +
                            std::to_string(static_cast<double>(rep.limit_diameter)) + ")");
  MatrixTuple<Real> mean = rep.orbit_limits.front();
  for (std::size_t i = 1; i < rep.orbit_limits.size(); ++i) mean = mean + rep.orbit_limits[i];
  mean = (Real(1) / Real(rep.orbit_limits.size())) * mean;
  rep.point = radial_boundary_point(dom, mean);
  return rep;
}

// ---------------------------------------------------------------------------
// Earle-Hamilton

template <class Real = double>
struct FixedPointReport {
  MatrixTuple<Real> point;  // level 1
  Real residual;            // max |f(x) - x|
  int iterations;
  Real min_image_margin;    // strictness spot check
  std::vector<std::pair<int, Real>> ampliation_residuals;  // (n, max |f(x I_n) - x I_n|)
};

struct EarleHamiltonOptions {
  int samples = 64;
  int max_iter = 100000;
  double strict_margin = 1e-6;
  std::vector<int> ampliation_levels{2, 3};
  std::uint64_t seed = 0x65685f636865636bULL;
};

/// Fixed point of a strict self-map (image strictly inside) by level-1
/// iteration from 0, then verified on ampliations.
template <class Real>
FixedPointReport<Real> earle_hamilton_fixed_point(const NcMap<Real>& f, const Domain<Real>& dom, Real tol,
                                                  const EarleHamiltonOptions& opt = {}) {
  Rng rng(opt.seed);
  Real min_margin = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < opt.samples; ++i) {
    const auto n = static_cast<Eigen::Index>(1 + i % 3);
    // probe just inside the boundary along a random ray
    const auto dir = sample_interior(dom, n, rng, Real(0.5));
    const auto x = (radial_exit(dom, dir, Real(8)) * Real(1 - 1e-9)) * dir;
    min_margin = std::min(min_margin, contains(dom, evaluate(f, x), Real(0)).margin);
  }
  if (!(min_margin >= Real(opt.strict_margin)))
    throw precondition_failure("earle_hamilton_fixed_point: image is not strictly inside the domain (min image margin " +
                               std::to_string(static_cast<double>(min_margin)) + ")");
  IterateOptions io;
  io.record_deltas = false;
  const auto tr = iterate(f, dom, MatrixTuple<Real>::zero(dom.dim(), 1), opt.max_iter, tol, io);
  if (tr.verdict == IterationVerdict::MaxIters)
    throw numerical_failure("earle_hamilton_fixed_point: no convergence in " + std::to_string(opt.max_iter) + " steps");
  FixedPointReport<Real> rep{tr.limit, 0, tr.iterations, min_margin, {}};
  rep.residual = max_abs_diff<Real>(evaluate(f, rep.point), rep.point);
  for (int n : opt.ampliation_levels) {
    const auto xa = ampliate(rep.point, n);
    rep.ampliation_residuals.emplace_back(n, max_abs_diff<Real>(evaluate(f, xa), xa));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Wolff points

template <class Real = double>
struct WolffPointReport {
  MatrixTuple<Real> xi;                 // numerical limit of the w_m, on the boundary
  std::vector<Real> radii;
  std::vector<MatrixTuple<Real>> fixed_points;  // w_m
  std::vector<Real> distances;          // max |w_m - xi|
  MatrixTuple<Real> denjoy_wolff;
  Real dw_mismatch;                     // max |xi - zeta|
};

struct WolffOptions {
  double tol = 1e-15;
  int max_iter = 200000;
  DenjoyWolffOptions dw;
  double dw_tol = 1e-13;
};

/// Fixed points w_m of Z -> F(r_m Z) along the schedule and their boundary
/// limit xi. Requires a BoundaryDW classification (fixed-point-freeness is
/// only detected numerically).
template <class Real>
WolffPointReport<Real> wolff_point(const NcMap<Real>& f, const Domain<Real>& dom, const std::vector<Real>& schedule,
                                   const WolffOptions& opt = {}) {
  if (schedule.empty()) throw invalid_input("wolff_point: empty schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0 && schedule[i] < 1)) throw invalid_input("wolff_point: radii must lie in (0,1)");
    if (i && !(schedule[i] > schedule[i - 1])) throw invalid_input("wolff_point: radii must increase");
  }
  const auto dw = denjoy_wolff_point(f, dom, Real(opt.dw_tol), opt.dw);
  if (dw.classification != DWClass::BoundaryDW)
    throw precondition_failure("wolff_point: map has an interior fixed point; a fixed-point-free map is required");
  WolffPointReport<Real> rep;
  rep.denjoy_wolff = dw.point;
  const int d = dom.dim();
  IterateOptions io;
  io.record_deltas = false;
  for (Real r : schedule) {
    std::vector<FreePolynomial<Real>> sc;
    for (int j = 0; j < d; ++j) sc.push_back(FreePolynomial<Real>::coordinate(d, j, Complex<Real>(r)));
    const auto fr = NcMap<Real>::compose(f, NcMap<Real>::polynomial(std::move(sc)));
    const auto tr = iterate(fr, dom, MatrixTuple<Real>::zero(d, 1), opt.max_iter, Real(opt.tol), io);
    if (tr.verdict == IterationVerdict::MaxIters)
      throw numerical_failure("wolff_point: inner iteration did not converge at r = " +
                              std::to_string(static_cast<double>(r)));
    rep.radii.push_back(r);
    rep.fixed_points.push_back(tr.limit);
  }
  rep.xi = radial_boundary_point(dom, rep.fixed_points.back());
  for (const auto& w : rep.fixed_points) rep.distances.push_back(max_abs_diff<Real>(w, rep.xi));
  rep.dw_mismatch = max_abs_diff<Real>(rep.xi, rep.denjoy_wolff);
  return rep;
}

// ---------------------------------------------------------------------------
// Cesaro averages and retractions

/// (1/m) sum_{k<m} F^{o k}, with F^{o 0} the identity.
template <class Real>
NcMap<Real> cesaro_average(const NcMap<Real>& f, int m) {
  if (m < 1) throw invalid_input("cesaro_average: m must be >= 1");
  if (!f.is_tuple_valued() || f.out_dim() != f.in_dim()) throw invalid_input("cesaro_average needs a self-map shape");
  const Complex<Real> w(Real(1) / Real(m));
  std::vector<std::pair<Complex<Real>, NcMap<Real>>> terms;
  NcMap<Real> chain = identity_map<Real>(f.in_dim());
  terms.emplace_back(w, chain);
  for (int k = 1; k < m; ++k) {
    chain = k == 1 ? f : NcMap<Real>::compose(f, chain);
    terms.emplace_back(w, chain);
  }
  return NcMap<Real>::affine(std::move(terms));
}

template <class Real = double>
struct RetractionReport {
  NcMap<Real> psi;            // phi iterated `iterations` times
  int iterations = 0;         // applications of phi needed on the test set
  bool converged = false;
  Real cauchy_defect = 0;     // final max |phi(y) - y| over the test set
  Real idempotency_defect = 0;
  Real fixed_set_defect = 0;  // max |psi(p) - p| over supplied fixed points of f
};

/// Iterates phi on the test set until the pointwise Cauchy defect falls
/// below tol, then measures psi o psi - psi and psi on Fix(f).
template <class Real>
RetractionReport<Real> retraction_limit(const NcMap<Real>& phi, const Domain<Real>& dom, int iters,
                                        const std::vector<MatrixTuple<Real>>& test_set,
                                        const std::vector<MatrixTuple<Real>>& fixed_points = {},
                                        Real tol = Real(1e-12)) {
  if (iters < 1) throw invalid_input("retraction_limit: iters must be >= 1");
  if (test_set.empty()) throw invalid_input("retraction_limit: empty test set");
  RetractionReport<Real> rep;
  std::vector<MatrixTuple<Real>> y = test_set;  // phi^{o k} on the test set
  for (int k = 1; k <= iters; ++k) {
    std::vector<MatrixTuple<Real>> next;
    Real defect = 0;
    for (const auto& p : y) {
      MatrixTuple<Real> q = evaluate(phi, p);
      if (contains(dom, q).status == Membership::Exterior)
        throw domain_violation("retraction_limit: phi left the domain at iteration " + std::to_string(k));
      defect = std::max(defect, max_abs_diff<Real>(q, p));
      next.push_back(std::move(q));
    }
    rep.cauchy_defect = defect;
    if (defect < tol && k > 1) {
      rep.converged = true;
      break;
    }
    y = std::move(next);
    rep.iterations = k;
    if (defect < tol) {
      rep.converged = true;
      break;
    }
  }
  rep.psi = iterate_map(phi, rep.iterations);
  for (const auto& p : y) rep.idempotency_defect = std::max(rep.idempotency_defect, max_abs_diff<Real>(evaluate(rep.psi, p), p));
  for (const auto& p : fixed_points)
    rep.fixed_set_defect = std::max(rep.fixed_set_defect, max_abs_diff<Real>(evaluate(rep.psi, p), p));
  return rep;
}

// ---------------------------------------------------------------------------
// Bedford dichotomy

enum class LimitClass { BoundaryValued, InteriorRetractLike };

inline const char* to_string(LimitClass c) {
  return c == LimitClass::BoundaryValued ? "BoundaryValued" : "InteriorRetractLike";
}

template <class Real = double>
struct LimitSample {
  MatrixTuple<Real> limit;
  int period;
  int iterations;
  Real margin;
};

template <class Real = double>
struct LimitClassification {
  LimitClass verdict;
  std::vector<LimitSample<Real>> samples;
  Real idempotency_defect = 0;  // max |g(g(x)) - g(x)| for the subsequence limit g
};

struct ClassifyOptions {
  double tol = 1e-11;
  double boundary_tol = 1e-8;
  int max_period = 8;
};

namespace detail {

/// Runs the orbit of x0 until some subsequence x_{k}, x_{k+p}, ... is
/// Cauchy (p <= max_period). Returns the limit of f^{o jp}.
template <class Real>
LimitSample<Real> subsequence_limit(const NcMap<Real>& f, const Domain<Real>& dom, const MatrixTuple<Real>& x0,
                                    int max_iter, const ClassifyOptions& opt, int forced_period = 0) {
  std::deque<MatrixTuple<Real>> window{x0};
  MatrixTuple<Real> x = x0;
  for (int k = 1; k <= max_iter; ++k) {
    x = evaluate(f, x);
    if (contains(dom, x, Real(opt.boundary_tol)).status == Membership::Exterior)
      throw domain_violation("classify_limit: orbit left the domain at step " + std::to_string(k));
    const int lo = forced_period ? forced_period : 1;
    const int hi = forced_period ? forced_period : opt.max_period;
    for (int p = lo; p <= hi && p <= static_cast<int>(window.size()); ++p) {
      const auto& back = window[window.size() - static_cast<std::size_t>(p)];
      // k must be a multiple of p so the limit belongs to f^{o jp} applied to x0.
      if (k % p == 0 && max_abs_diff<Real>(x, back) < Real(opt.tol))
        return {x, p, k, contains(dom, x, Real(0)).margin};
    }
    window.push_back(x);
    if (static_cast<int>(window.size()) > opt.max_period) window.pop_front();
  }
  throw numerical_failure("classify_limit: no convergent subsequence with period <= " +
                          std::to_string(opt.max_period) + " within " + std::to_string(max_iter) + " steps");
}

}  // namespace detail

/// Classifies the subsequential limits g of f^{o n} on the samples: all on
/// the boundary, or all interior (then g is a retraction up to an
/// automorphism of its image). A mixed outcome contradicts the dichotomy.
template <class Real>
LimitClassification<Real> classify_limit(const NcMap<Real>& f, const Domain<Real>& dom,
                                         const std::vector<MatrixTuple<Real>>& samples, int max_iter,
                                         const ClassifyOptions& opt = {}) {
  if (samples.empty()) throw invalid_input("classify_limit: no samples");
  LimitClassification<Real> out{LimitClass::BoundaryValued, {}, 0};
  int boundary = 0;
  for (const auto& s : samples) {
    auto ls = detail::subsequence_limit(f, dom, s, max_iter, opt);
    if (ls.margin <= Real(opt.boundary_tol)) ++boundary;
    out.samples.push_back(std::move(ls));
  }
  const int total = static_cast<int>(samples.size());
  if (boundary != 0 && boundary != total)
    throw property_violation("classify_limit: mixed verdict (" + std::to_string(boundary) + " of " +
                             std::to_string(total) + " limits on the boundary)");
  out.verdict = boundary == total ? LimitClass::BoundaryValued : LimitClass::InteriorRetractLike;
  if (out.verdict == LimitClass::InteriorRetractLike) {
    for (const auto& ls : out.samples) {
      const auto again = detail::subsequence_limit(f, dom, ls.limit, max_iter, opt, ls.period);
      out.idempotency_defect = std::max(out.idempotency_defect, max_abs_diff<Real>(again.limit, ls.limit));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed points through the origin

/// Matrix of the linear map Z -> Delta f(0_n, 0_n)(Z) on vec(Z) in
/// C^{d n^2} (coordinate-major, column-major within each coordinate).
template <class Real>
CMatrix<Real> derivative_matrix(const NcMap<Real>& f, Eigen::Index n) {
  const int d = f.in_dim();
  if (!f.is_tuple_valued() || f.out_dim() != d) throw invalid_input("derivative_matrix needs a self-map shape");
  const Eigen::Index dim = d * n * n;
  CMatrix<Real> m(dim, dim);
  const auto zero = MatrixTuple<Real>::zero(d, n);
  for (Eigen::Index c = 0; c < dim; ++c) {
    auto z = BlockTuple<Real>::zero(d, n, n);
    std::vector<CMatrix<Real>> coords = z.coords();
    coords[static_cast<std::size_t>(c / (n * n))].data()[c % (n * n)] = Complex<Real>(1);
    const auto val = as_tuple(derivative(f, zero, BlockTuple<Real>(std::move(coords))));
    for (int j = 0; j < d; ++j) m.block(j * n * n, c, n * n, 1) = Eigen::Map<const CVector<Real>>(val[j].data(), n * n);
  }
  return m;
}

/// Orthonormal basis (columns) of the eigenvalue-1 eigenspace of the
/// derivative at 0_n.
template <class Real>
CMatrix<Real> fixed_subspace_at_origin(const NcMap<Real>& f, Eigen::Index n, Real tol = Real(1e-9)) {
  const CMatrix<Real> a = derivative_matrix(f, n) - linalg::identity<Real>(f.in_dim() * n * n);
  Eigen::JacobiSVD<CMatrix<Real>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

/// vec(X) in the layout of derivative_matrix.
template <class Real>
CVector<Real> vectorize(const BlockTuple<Real>& x) {
  const Eigen::Index blk = x.rows() * x.cols();
  CVector<Real> v(x.dim() * blk);
  for (int j = 0; j < x.dim(); ++j) v.segment(j * blk, blk) = Eigen::Map<const CVector<Real>>(x[j].data(), blk);
  return v;
}

}  // namespace ncgeom
