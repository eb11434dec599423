#pragma once

// Horosphere ratios delta~(0,w)^{-1} delta~(Z, w (x) I_n) as w approaches a
// boundary point, big/small horosphere estimates, the closed form on the
// row ball, and the nc Wolff inclusion experiment.

#include <string>
#include <vector>

#include "ncgeom/dynamics.hpp"

namespace ncgeom {

namespace detail {

template <class Real>
void require_q_vanishes_at_origin(const Domain<Real>& dom) {
  if (!dom.is_dq_type()) throw invalid_input("horospheres are defined on DQ-type domains only");
  const auto q0 = evaluate_block(dom.defining_q(), MatrixTuple<Real>::zero(dom.dim(), 1));
  if (!(linalg::max_abs<Real>(q0.data()) <= Real(1e-14))) throw invalid_input("horospheres require Q(0) = 0");
}

}  // namespace detail

/// delta~(0, w)^{-1} delta~(Z, w (x) I_n) for a level-1 interior w != 0.
template <class Real>
Real horosphere_ratio(const Domain<Real>& dom, const MatrixTuple<Real>& z, const MatrixTuple<Real>& w) {
  detail::require_q_vanishes_at_origin(dom);
  if (w.level() != 1) throw invalid_input("horosphere_ratio: w must be a level-1 point");
  if (row_norm(w) == Real(0)) throw invalid_input("horosphere_ratio: undefined at w = 0");
  const Real base = delta_tilde(dom, MatrixTuple<Real>::zero(dom.dim(), 1), w).value;
  return delta_tilde(dom, z, ampliate(w, z.level())).value / base;
}

/// Limit of the horosphere ratio on the row ball as w -> zeta radially:
/// |D_Z^{-1/2} (I - Z'_1)| with Z'_1 = sum_j conj(zeta_j) Z_j. Its square is
/// |1 - z_1|^2 / (1 - |z|^2) at level 1 with zeta = e_1.
template <class Real>
Real ball_horosphere_closed_form(const std::vector<Complex<Real>>& zeta, const MatrixTuple<Real>& z) {
  if (static_cast<int>(zeta.size()) != z.dim()) throw invalid_input("closed form: zeta and Z differ in d");
  Real n2 = 0;
  for (const auto& v : zeta) n2 += std::norm(v);
  if (!(std::abs(std::sqrt(n2) - Real(1)) <= Real(1e-9))) throw invalid_input("closed form: zeta must be a unit vector");
  if (!(row_norm(z) < Real(1))) throw domain_violation("closed form: Z is not inside the row ball");
  const MatrixTuple<Real> zr = rotate_coordinates(z, rotation_to_first_axis(zeta));
  CMatrix<Real> defect = CMatrix<Real>::Identity(z.level(), z.level());
  for (const auto& m : z.coords()) defect -= m * m.adjoint();
  const CMatrix<Real> m = linalg::hermitian_inv_sqrt<Real>(defect) * (linalg::identity<Real>(z.level()) - zr[0]);
  return linalg::op_norm<Real>(m);
}

/// t_k = 1 - 2^{-k}, k = 1..count.
template <class Real = double>
std::vector<Real> default_schedule(int count = 14) {
  std::vector<Real> t;
  for (int k = 1; k <= count; ++k) t.push_back(Real(1) - std::ldexp(Real(1), -k));
  return t;
}

enum class HoroVerdict { InSmall, InBigOnly, Outside, Inconclusive };

inline const char* to_string(HoroVerdict v) {
  switch (v) {
    case HoroVerdict::InSmall: return "InSmall";
    case HoroVerdict::InBigOnly: return "InBigOnly";
    case HoroVerdict::Outside: return "Outside";
    default: return "Inconclusive";
  }
}

template <class Real = double>
struct HorosphereQuery {
  Domain<Real> domain;
  std::vector<Complex<Real>> zeta;
  Real R;
  MatrixTuple<Real> Z;
  std::vector<Real> schedule = default_schedule<Real>();
  int tail = 5;
  Real slack = Real(1e-3);
  bool use_closed_form = true;  // row ball only
};

template <class Real = double>
struct HorosphereEstimate {
  std::vector<Real> ratios;  // along the schedule
  Real liminf_est;
  Real limsup_est;
  HoroVerdict verdict;
  bool closed_form = false;
};

template <class Real>
HoroVerdict horo_verdict(Real liminf_est, Real limsup_est, Real r, Real slack) {
  if (limsup_est < r - slack) return HoroVerdict::InSmall;
  if (liminf_est < r - slack) return HoroVerdict::InBigOnly;
  if (liminf_est >= r + slack) return HoroVerdict::Outside;
  return HoroVerdict::Inconclusive;
}

/// Estimates liminf/limsup of the ratio over the schedule tail and compares
/// them with R. On the row ball the closed form supplies the limit.
template <class Real>
HorosphereEstimate<Real> horosphere_membership(const HorosphereQuery<Real>& q) {
  const auto& dom = q.domain;
  detail::require_q_vanishes_at_origin(dom);
  if (!(q.R > 0)) throw invalid_input("horosphere_membership: R must be positive");
  if (q.schedule.size() < 8) throw invalid_input("horosphere_membership: schedule needs at least 8 points");
  if (q.tail < 1 || q.tail > static_cast<int>(q.schedule.size()))
    throw invalid_input("horosphere_membership: tail window out of range");
  const auto zeta = MatrixTuple<Real>::scalar(q.zeta);
  if (contains(dom, zeta).status != Membership::Boundary)
    throw invalid_input("horosphere_membership: zeta is not a boundary point");
  HorosphereEstimate<Real> est;
  if (dom.is_row_ball() && q.use_closed_form) {
    const Real v = ball_horosphere_closed_form(q.zeta, q.Z);
    est.liminf_est = est.limsup_est = v;
    est.closed_form = true;
  } else {
    for (Real t : q.schedule) est.ratios.push_back(horosphere_ratio(dom, q.Z, t * zeta));
    const auto first = est.ratios.end() - q.tail;
    est.liminf_est = *std::min_element(first, est.ratios.end());
    est.limsup_est = *std::max_element(first, est.ratios.end());
  }
  est.verdict = horo_verdict(est.liminf_est, est.limsup_est, q.R, q.slack);
  return est;
}

/// Smallest R of the form R0 * 2^k giving InSmall (coverage of the domain
/// by small horospheres).
template <class Real>
Real covering_radius(HorosphereQuery<Real> q, int max_doublings = 60) {
  for (int k = 0; k <= max_doublings; ++k) {
    if (horosphere_membership(q).verdict == HoroVerdict::InSmall) return q.R;
    q.R *= 2;
  }
  throw numerical_failure("covering_radius: no small horosphere contains the point");
}

// ---------------------------------------------------------------------------
// Wolff inclusion experiment

template <class Real = double>
struct WolffSample {
  int id;
  Eigen::Index level;
  MatrixTuple<Real> Z;
  std::vector<HoroVerdict> verdicts;  // per iterate k = 0..n_iters
  std::vector<Real> ratio_tail;       // limit estimate per iterate
};

template <class Real = double>
struct WolffViolation {
  int sample_id;
  int iterate;
  Real liminf_est;
  std::string detail;
};

template <class Real = double>
struct TriangleCheck {
  int checked = 0;
  int violations = 0;
  Real max_excess = -std::numeric_limits<Real>::infinity();  // max of lhs - rhs
};

template <class Real = double>
struct WolffExperimentReport {
  MatrixTuple<Real> xi;
  Real R;
  WolffPointReport<Real> wolff;
  std::vector<WolffSample<Real>> samples;
  std::vector<WolffViolation<Real>> violations;
  TriangleCheck<Real> triangle;
  int sampling_attempts = 0;
};

struct WolffExperimentOptions {
  std::vector<int> levels{1, 2};
  std::uint64_t seed = 1;
  double sample_fraction = 0.95;
  int max_attempts_per_sample = 200;
  int triangle_triples = 200;
  double triangle_tol = 1e-8;
  std::vector<double> wolff_schedule{0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
  WolffOptions wolff;
};

/// Triangle-type bound on a triple with |Q(W)| > |Q(X)|:
/// delta~(X,W)^{-1} delta~(Z,W) <= delta~(Z,X)/(|Q(W)|-|Q(X)|) + |D_{Q(Z)^*}^{-1/2} D_{Q(X)^*}^{1/2}|.
/// Returns lhs - rhs.
template <class Real>
Real triangle_excess(const Domain<Real>& dom, const MatrixTuple<Real>& x, const MatrixTuple<Real>& z,
                     const MatrixTuple<Real>& w) {
  const auto q = dom.defining_q();
  const CMatrix<Real> qx = evaluate_block(q, x).data();
  const CMatrix<Real> qz = evaluate_block(q, z).data();
  const CMatrix<Real> qw = evaluate_block(q, w).data();
  const Real gap = linalg::op_norm<Real>(qw) - linalg::op_norm<Real>(qx);
  if (!(gap > 0)) throw invalid_input("triangle_excess: needs |Q(W)| > |Q(X)|");
  const Real lhs = delta_tilde(dom, z, w).value / delta_tilde(dom, x, w).value;
  const CMatrix<Real> cross = linalg::hermitian_inv_sqrt<Real>(linalg::right_defect<Real>(qz)) *
                              linalg::hermitian_sqrt<Real>(linalg::right_defect<Real>(qx));
  const Real rhs = delta_tilde(dom, z, x).value / gap + linalg::op_norm<Real>(cross);
  return lhs - rhs;
}

/// Samples points of the small horosphere E_R(xi), iterates the map on them
/// and flags every iterate whose estimate is Outside (not in F_R(xi)).
template <class Real>
WolffExperimentReport<Real> wolff_experiment(const NcMap<Real>& f, const Domain<Real>& dom, Real R, int samples,
                                             int n_iters, const WolffExperimentOptions& opt = {}) {
  detail::require_q_vanishes_at_origin(dom);
  if (!(R > 0)) throw invalid_input("wolff_experiment: R must be positive");
  if (samples < 1 || n_iters < 0) throw invalid_input("wolff_experiment: samples >= 1 and n_iters >= 0 required");
  WolffExperimentReport<Real> rep;
  rep.R = R;
  std::vector<Real> sched(opt.wolff_schedule.begin(), opt.wolff_schedule.end());
  rep.wolff = wolff_point(f, dom, sched, opt.wolff);
  rep.xi = rep.wolff.xi;
  HorosphereQuery<Real> q{dom, rep.xi.scalars(), R, MatrixTuple<Real>::zero(dom.dim(), 1)};
  // The limit point is a unit vector up to rounding; renormalize.
  if (dom.is_row_ball()) {
    Real n2 = 0;
    for (const auto& v : q.zeta) n2 += std::norm(v);
    for (auto& v : q.zeta) v /= std::sqrt(n2);
  }
  Rng rng(opt.seed);
  int id = 0;
  for (int level : opt.levels) {
    int found = 0, attempts = 0;
    while (found < samples) {
      if (++attempts > opt.max_attempts_per_sample * samples)
        throw precondition_failure("wolff_experiment: found only " + std::to_string(found) + " of " +
                                   std::to_string(samples) + " small-horosphere points at level " +
                                   std::to_string(level) + "; R is too small");
      q.Z = sample_interior(dom, level, rng, Real(opt.sample_fraction));
      if (horosphere_membership(q).verdict != HoroVerdict::InSmall) continue;
      ++found;
      WolffSample<Real> s{id++, level, q.Z, {}, {}};
      MatrixTuple<Real> zk = q.Z;
      for (int k = 0; k <= n_iters; ++k) {
        if (k > 0) zk = evaluate(f, zk);
        q.Z = zk;
        const auto est = horosphere_membership(q);
        s.verdicts.push_back(est.verdict);
        s.ratio_tail.push_back(est.liminf_est);
        if (est.verdict == HoroVerdict::Outside)
          rep.violations.push_back({s.id, k, est.liminf_est, "iterate left the big horosphere"});
      }
      rep.samples.push_back(std::move(s));
    }
    rep.sampling_attempts += attempts;
  }
  // Triangle bound on random triples.
  const auto qmap = dom.defining_q();
  auto qnorm = [&](const MatrixTuple<Real>& x) { return linalg::op_norm<Real>(evaluate_block(qmap, x).data()); };
  for (int i = 0; i < opt.triangle_triples; ++i) {
    const auto n = static_cast<Eigen::Index>(opt.levels[static_cast<std::size_t>(i) % opt.levels.size()]);
    MatrixTuple<Real> x = sample_interior(dom, n, rng, Real(opt.sample_fraction));
    MatrixTuple<Real> z = sample_interior(dom, n, rng, Real(opt.sample_fraction));
    MatrixTuple<Real> w = sample_interior(dom, n, rng, Real(opt.sample_fraction));
    if (qnorm(w) < qnorm(x)) std::swap(w, x);
    if (!(qnorm(w) > qnorm(x))) continue;
    const Real excess = triangle_excess(dom, x, z, w);
    ++rep.triangle.checked;
    rep.triangle.max_excess = std::max(rep.triangle.max_excess, excess);
    if (excess > Real(opt.triangle_tol)) ++rep.triangle.violations;
  }
  return rep;
}

}  // namespace ncgeom
