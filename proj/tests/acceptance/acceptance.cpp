// Acceptance campaign: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ncgeom;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Tally {
  int bad = 0;
  double worst = 0;
  void at_most(double v, double bound) {
    worst = std::max(worst, v);
    if (!(v <= bound)) ++bad;
  }
  void require(bool ok) { bad += !ok; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome verdict(const Tally& t, int cases, const std::string& what = "max") {
  return {t.bad == 0, std::to_string(cases) + " cases, " + std::to_string(t.bad) + " violations, " + what + " " +
                          sci(t.worst)};
}

// levels cycle through 1..3
Eigen::Index lvl(int i) { return 1 + i % 3; }

Outcome lempert_oracle() {
  Rng rng(1001);
  const std::vector<Domain<double>> doms{Domain<double>::row_ball(2), fx::quadratic_dq(), fx::quadratic_hl()};
  Tally t, svd;
  for (const auto& dom : doms)
    for (int i = 0; i < 300; ++i) {
      const auto x = sample_interior(dom, lvl(i), rng, 0.9);
      const auto y = sample_interior(dom, lvl(i / 3), rng, 0.9);
      const auto z = random_direction<double>(2, x.level(), y.level(), 1.0, rng);
      const double closed = lempert_delta(dom, x, y, z).value;
      t.at_most(std::abs(closed - lempert_delta_oracle(dom, x, y, z).value), 1e-6);
      if (dom.name() == "row_ball")
        svd.at_most(std::abs(closed - oracle::row_ball_lempert(x.coords(), y.coords(), z.coords())), 1e-6);
    }
  auto out = verdict(t, 900, "max |closed - bisection|");
  out.pass = out.pass && svd.bad == 0;
  out.detail += ", row ball vs SVD oracle " + sci(svd.worst);
  return out;
}

Outcome delta_identity() {
  Rng rng(1002);
  Tally t;
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    NcMap<double> f = [&] {
      if (i % 2 == 0) return fx::random_ball_self_map(2, rng);
      std::ostringstream a, b;
      a << c(rng) << "*x1 + " << c(rng) << "*x1x2 + " << c(rng) << "*x2x2x1 + " << c(rng);
      b << c(rng) << "*x2 - " << c(rng) << "*x2x1 + " << c(rng) << "*x1x1";
      return fx::poly({a.str(), b.str()}, 2);
    }();
    const auto x = random_tuple<double>(2, lvl(i), 0.8, rng), y = random_tuple<double>(2, lvl(i), 0.8, rng);
    const auto lhs = as_tuple(diff_differential<double>(f, x, y, x - y));
    const auto fx_ = evaluate(f, x), fy = evaluate(f, y);
    double err = 0;
    for (int j = 0; j < 2; ++j) err = std::max(err, linalg::max_abs<double>(lhs[j] - (fx_[j] - fy[j])));
    t.at_most(err, 1e-10);
  }
  return verdict(t, 200);
}

Outcome symmetry() {
  Rng rng(1003);
  Tally t;
  for (int i = 0; i < 300; ++i) {
    const int d = 1 + i % 3;
    const auto ball = Domain<double>::row_ball(d);
    const auto x = random_tuple<double>(d, lvl(i / 3), 0.95, rng), y = random_tuple<double>(d, lvl(i / 3), 0.95, rng);
    t.at_most(std::abs(delta_tilde(ball, x, y).value - delta_tilde(ball, y, x).value), 1e-8);
  }
  return verdict(t, 300);
}

Outcome schwarz_pick() {
  Rng rng(1004);
  Tally t;
  for (int m = 0; m < 20; ++m) {
    const int d = 1 + m % 3;
    const auto ball = Domain<double>::row_ball(d);
    const auto f = fx::random_ball_self_map(d, rng);
    for (int i = 0; i < 50; ++i) {
      const auto x = random_tuple<double>(d, lvl(i), 0.9, rng), y = random_tuple<double>(d, lvl(i), 0.9, rng);
      t.at_most(delta_tilde(ball, evaluate(f, x), evaluate(f, y)).value - delta_tilde(ball, x, y).value, 1e-8);
    }
  }
  return verdict(t, 1000, "max excess");
}

Outcome metric_equivalence() {
  Rng rng(1005);
  Tally chain_t, path_t;
  const std::vector<Domain<double>> doms{Domain<double>::row_ball(2), fx::pencil_dq()};
  for (int i = 0; i < 50; ++i) {
    const auto& dom = doms[static_cast<std::size_t>(i % 2)];
    const auto x = sample_interior(dom, lvl(i / 2), rng, 0.8), y = sample_interior(dom, lvl(i / 2), rng, 0.8);
    const double chain = chain_distance(dom, x, y, 256).value;
    const double path = path_distance(dom, x, y, 64).value;
    chain_t.at_most(chain - path, 1e-3);
    path_t.at_most(path - std::numbers::pi * chain, 5e-2);
  }
  const auto disc = Domain<double>::row_ball(1);
  const double p = path_distance(disc, MatrixTuple<double>::zero(1, 1), MatrixTuple<double>::scalar({0.5})).value;
  const double scalar_err = std::abs(p - std::atanh(0.5));
  return {chain_t.bad == 0 && path_t.bad == 0 && scalar_err <= 1e-5,
          "50 pairs, chain-path max " + sci(chain_t.worst) + ", path-pi*chain max " + sci(path_t.worst) +
              ", |path(0,0.5) - atanh(0.5)| " + sci(scalar_err)};
}

Outcome convex_and_isometry() {
  Rng rng(1006);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  Tally conv, iso;
  const std::vector<Domain<double>> doms{Domain<double>::row_ball(2), fx::pencil_dq(), fx::pencil_hl()};
  for (int i = 0; i < 200; ++i) {
    const auto& dom = doms[static_cast<std::size_t>(i % 3)];
    const auto n = lvl(i / 3);
    const auto x = sample_interior(dom, n, rng, 0.9), y = sample_interior(dom, n, rng, 0.9);
    const auto a = random_direction<double>(2, n, n, 1.0, rng);
    const double s = u(rng);
    const auto m = s * x + (1 - s) * y;
    const double rho = finsler_seminorm(dom, m, a).value;
    const double dxy = std::max(lempert_delta(dom, x, y, a).value, lempert_delta(dom, y, x, a).value);
    conv.at_most(rho - dxy / (2 * std::sqrt(s * (1 - s))), 1e-8);
    conv.at_most(rho - std::max(finsler_seminorm(dom, x, a).value, finsler_seminorm(dom, y, a).value), 1e-8);
  }
  for (int i = 0; i < 200; ++i) {
    const auto& dom = doms[static_cast<std::size_t>(i % 3)];
    const auto n = 1 + lvl(i / 3), m = 1 + lvl(i / 9);
    const auto x = sample_interior(dom, n, rng, 0.9), y = sample_interior(dom, m, rng, 0.9);
    const auto z = random_direction<double>(2, n, m, 1.0, rng);
    const auto v = random_isometry<double>(n, 1 + rng() % static_cast<std::uint64_t>(n), rng);
    const auto w = random_isometry<double>(m, 1 + rng() % static_cast<std::uint64_t>(m), rng);
    iso.at_most(lempert_delta(dom, compress(x, v), compress(y, w), compress(z, v, w)).value -
                    lempert_delta(dom, x, y, z).value,
                1e-8);
  }
  return {conv.bad == 0 && iso.bad == 0, "200 + 200 cases, convex excess " + sci(conv.worst) + " (" +
                                             std::to_string(conv.bad) + " bad), isometry excess " + sci(iso.worst) +
                                             " (" + std::to_string(iso.bad) + " bad)"};
}

CMatrix<double> kron_identity(const CMatrix<double>& a, Eigen::Index n) {
  CMatrix<double> out = CMatrix<double>::Zero(a.rows() * n, a.cols() * n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * n, j * n, n, n).diagonal().setConstant(a(i, j));
  return out;
}

Outcome ruan() {
  Rng rng(1007);
  Tally maxf, bimod;
  const std::vector<Domain<double>> doms{Domain<double>::row_ball(2), fx::quadratic_dq(), fx::quadratic_hl()};
  for (int i = 0; i < 60; ++i) {
    const auto& dom = doms[static_cast<std::size_t>(i % 3)];
    const auto x = sample_interior(dom, lvl(i / 3) % 2 + 1, rng, 0.9);
    const auto n = x.level();
    const Eigen::Index k = 1 + i % 2, l = 1 + (i / 2) % 2;
    const auto z = random_direction<double>(2, k * n, k * n, 1.0, rng);
    const auto w = random_direction<double>(2, l * n, l * n, 1.0, rng);
    std::vector<CMatrix<double>> zw;
    for (int j = 0; j < 2; ++j) {
      CMatrix<double> b = CMatrix<double>::Zero((k + l) * n, (k + l) * n);
      b.topLeftCorner(k * n, k * n) = z[j];
      b.bottomRightCorner(l * n, l * n) = w[j];
      zw.push_back(b);
    }
    const double sum = finsler_seminorm(dom, ampliate(x, k + l), BlockTuple<double>(zw)).value;
    const double parts =
        std::max(finsler_seminorm(dom, ampliate(x, k), z).value, finsler_seminorm(dom, ampliate(x, l), w).value);
    maxf.at_most(std::abs(sum - parts), 1e-8);
  }
  for (int i = 0; i < 100; ++i) {
    const auto& dom = doms[static_cast<std::size_t>(i % 3)];
    const auto x = sample_interior(dom, 1 + i % 2, rng, 0.9);
    const auto n = x.level();
    const Eigen::Index k = 2 + i % 2;
    const auto z = random_direction<double>(2, k * n, k * n, 1.0, rng);
    const CMatrix<double> alpha = random_gaussian_matrix<double>(k, k, rng), beta = random_gaussian_matrix<double>(k, k, rng);
    const CMatrix<double> ai = kron_identity(alpha, n), bi = kron_identity(beta, n);
    std::vector<CMatrix<double>> az;
    for (int j = 0; j < 2; ++j) az.push_back(ai * z[j] * bi);
    const auto xa = ampliate(x, k);
    const double lhs = finsler_seminorm(dom, xa, BlockTuple<double>(az)).value;
    const double rhs = linalg::op_norm<double>(alpha) * linalg::op_norm<double>(beta) * finsler_seminorm(dom, xa, z).value;
    bimod.at_most(lhs - rhs, 1e-8);
  }
  return {maxf.bad == 0 && bimod.bad == 0, "max formula 60 cases err " + sci(maxf.worst) + ", bimodule 100 cases excess " +
                                               sci(bimod.worst)};
}

Outcome denjoy_wolff() {
  const auto disc = Domain<double>::row_ball(1);
  const auto scalar = [](cd z) { return (z + 0.5) / (1.0 + z / 2.0); };
  const cd oracle_zeta = oracle::scalar_orbit_limit(scalar, 0.0, 2000);
  double worst_res = 0, zeta_err = 0;
  struct Case {
    NcMap<double> f;
    Domain<double> dom;
    std::vector<cd> zeta;
  };
  const std::vector<Case> cases{{fx::hyperbolic(), disc, {oracle_zeta}},
                                {fx::hyperbolic_product(), Domain<double>::row_ball(2), {oracle_zeta, 0.0}},
                                {fx::hyperbolic_product(), Domain<double>::max_ball(2), {oracle_zeta, 0.0}}};
  bool ok = true;
  for (const auto& c : cases) {
    const auto dw = denjoy_wolff_point(c.f, c.dom, 1e-13);
    ok = ok && dw.classification == DWClass::BoundaryDW;
    for (std::size_t j = 0; j < c.zeta.size(); ++j) zeta_err = std::max(zeta_err, std::abs(dw.point.scalars()[j] - c.zeta[j]));
    for (Eigen::Index n = 1; n <= 3; ++n) {
      const auto tr = iterate(c.f, c.dom, MatrixTuple<double>::zero(c.dom.dim(), n), 20000, 1e-13);
      worst_res = std::max(worst_res, max_abs_diff<double>(tr.limit, ampliate(MatrixTuple<double>::scalar(c.zeta), n)));
    }
  }
  ok = ok && worst_res < 1e-5 && zeta_err < 1e-6;
  return {ok, "ball d=1, ball d=2, max ball d=2; level residual max " + sci(worst_res) + ", zeta err " + sci(zeta_err)};
}

// eigenvalue-1 eigenspace of Z -> d/dt f(tZ)|0 from central differences, as an orthogonal projector
CMatrix<double> fixed_projector_oracle(const NcMap<double>& f, int d, Eigen::Index n) {
  const Eigen::Index dim = d * n * n;
  CMatrix<double> jac(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    std::vector<CMatrix<double>> e(static_cast<std::size_t>(d), CMatrix<double>::Zero(n, n));
    const auto j = col / (n * n), r = col % (n * n);
    e[static_cast<std::size_t>(j)](r % n, r / n) = 1.0;
    const MatrixTuple<double> dir(e);
    const CMatrix<double> g = oracle::central_difference(
        [&](double t) {
          const auto v = evaluate(f, t * dir);
          CMatrix<double> flat(dim, 1);
          for (int c = 0; c < d; ++c) flat.middleRows(c * n * n, n * n) = v[c].reshaped(n * n, 1);
          return flat;
        },
        1e-4);
    jac.col(col) = g.col(0);
  }
  Eigen::JacobiSVD<CMatrix<double>> svd(jac - CMatrix<double>::Identity(dim, dim), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-7) ++rank;
  const CMatrix<double> kernel = svd.matrixV().rightCols(dim - rank);
  return kernel * kernel.adjoint();
}

Outcome fixed_points() {
  const auto disc = Domain<double>::row_ball(1), ball2 = Domain<double>::row_ball(2);
  struct Case {
    NcMap<double> f;
    const Domain<double>* dom;
  };
  const std::vector<Case> cases{{fx::poly({"0.5*x1 + 0.1"}, 1), &disc},
                                {fx::poly({"0.25*x1x1 + 0.1"}, 1), &disc},
                                {fx::poly({"0.4*x1 + 0.2*x1x2 + 0.1", "0.3*x2 - 0.1 + 0.1*x1x1"}, 2), &ball2}};
  double worst = 0;
  for (const auto& c : cases) {
    const auto rep = earle_hamilton_fixed_point(c.f, *c.dom, 1e-15);
    worst = std::max(worst, rep.residual);
    for (const auto& [n, res] : rep.ampliation_residuals) worst = std::max(worst, res);
  }
  Rng rng(1009);
  double proj_err = 0;
  for (int m = 0; m < 10; ++m) {
    const int d = 2 + m % 2, keep = 1 + m % 2;
    const auto f = fx::fixed_space_map(d, keep, rng);
    for (Eigen::Index n : {1, 2}) {
      const auto basis = fixed_subspace_at_origin(f, n);
      const CMatrix<double> p = basis * basis.adjoint();
      proj_err = std::max(proj_err, linalg::max_abs<double>(p - fixed_projector_oracle(f, d, n)));
    }
  }
  return {worst < 1e-10 && proj_err < 1e-6,
          "fixed point residual max " + sci(worst) + " (levels 1-3), 10 maps fixed subspace projector err " + sci(proj_err)};
}

Outcome retraction() {
  Rng rng(1010);
  const auto ball2 = Domain<double>::row_ball(2);
  std::vector<MatrixTuple<double>> tests, fixed;
  for (int i = 0; i < 50; ++i) tests.push_back(random_tuple<double>(2, lvl(i), 0.9, rng));
  for (int i = 0; i < 10; ++i) {
    const auto p = random_tuple<double>(1, lvl(i), 0.9, rng);
    fixed.push_back(MatrixTuple<double>({p[0], CMatrix<double>::Zero(p.level(), p.level())}));
  }
  double idem = 0, fix = 0;
  bool converged = true;
  for (const auto& [f, m] : std::vector<std::pair<NcMap<double>, int>>{
           {fx::poly({"x1", "-1*x2"}, 2), 2}, {fx::rotation(2, 2 * std::numbers::pi / 3), 3}, {fx::rotation(2, std::numbers::pi / 2), 4}}) {
    const auto r = retraction_limit(cesaro_average(f, m), ball2, 50, tests, fixed);
    converged = converged && r.converged;
    idem = std::max(idem, r.idempotency_defect);
    fix = std::max(fix, r.fixed_set_defect);
  }
  return {converged && idem < 1e-6 && fix < 1e-6,
          "sign flip, rotations 2pi/3 and pi/2; idempotency " + sci(idem) + ", fixed set " + sci(fix)};
}

Outcome bedford() {
  Rng rng(1011);
  const auto disc = Domain<double>::row_ball(1), ball2 = Domain<double>::row_ball(2);
  struct Case {
    std::string name;
    NcMap<double> f;
    const Domain<double>* dom;
  };
  const std::vector<Case> cases{{"hyperbolic", fx::hyperbolic(), &disc},
                                {"z/2", fx::poly({"0.5*x1"}, 1), &disc},
                                {"(-z1, z2/2)", fx::poly({"-1*x1", "0.5*x2"}, 2), &ball2},
                                {"f_B", fx::hyperbolic_pair(), &ball2}};
  std::string summary;
  bool ok = true;
  for (const auto& c : cases) {
    std::vector<MatrixTuple<double>> s;
    for (int i = 0; i < 150; ++i) s.push_back(sample_interior(*c.dom, lvl(i), rng, 0.9));
    try {
      const auto r = classify_limit(c.f, *c.dom, s, 20000);
      summary += c.name + " " + to_string(r.verdict) + "; ";
    } catch (const property_violation& e) {
      ok = false;
      summary += c.name + " mixed; ";
    }
  }
  return {ok, "50 samples x 3 levels: " + summary};
}

Outcome max_ball_structure() {
  MaxBallOptions opt;
  opt.restarts = 64;
  bool rejected = true;
  for (int d : {2, 3})
    for (double eps : {0.1, 0.01}) {
      std::vector<CMatrix<double>> c(static_cast<std::size_t>(d), CMatrix<double>::Zero(2, 2));
      c[0] = CMatrix<double>::Identity(2, 2);
      c[1](0, 1) = eps;
      rejected = rejected &&
                 contains(Domain<double>::max_ball(d), MatrixTuple<double>(c), default_boundary_tol, opt).status ==
                     Membership::Exterior;
    }
  Rng rng(1012);
  Tally level1;
  int inclusion_bad = 0;
  for (int i = 0; i < 500; ++i) {
    const int d = 1 + i % 3;
    const auto z = random_tuple<double>(d, 1, 0.999, rng);
    level1.at_most(std::abs(max_ball_support(z, opt).value - oracle::norm2(z.scalars())), 1e-9);
    const auto x = random_tuple<double>(d, lvl(i / 3), 0.999, rng);
    inclusion_bad += contains(Domain<double>::max_ball(d), x, default_boundary_tol, opt).status != Membership::Interior;
  }
  return {rejected && level1.bad == 0 && inclusion_bad == 0,
          std::string("(I, eps E12) ") + (rejected ? "rejected" : "ACCEPTED") + "; level 1 err " + sci(level1.worst) +
              " on 500; RowBall outside MaxBall " + std::to_string(inclusion_bad) + " of 500"};
}

std::vector<cd> unit(int d, Rng& rng) {
  CMatrix<double> g = random_gaussian_matrix<double>(d, 1, rng);
  g /= g.norm();
  return {g.data(), g.data() + d};
}

Outcome horospheres() {
  Rng rng(1013);
  Tally agree;
  const double t = 1 - std::ldexp(1.0, -14);
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 3;
    const auto zeta = unit(d, rng);
    const auto z = random_tuple<double>(d, lvl(i / 3), 0.9, rng);
    const double ratio = horosphere_ratio(Domain<double>::row_ball(d), z, t * MatrixTuple<double>::scalar(zeta));
    agree.at_most(std::abs(ratio - ball_horosphere_closed_form(zeta, z)), 2e-2);
  }
  // nesting, coverage, vacuity
  const auto ball2 = Domain<double>::row_ball(2);
  const auto dq = fx::quadratic_dq();
  const auto zeta_dq = radial_boundary_point(dq, MatrixTuple<double>::scalar({0.6, 0.3})).scalars();
  int props_bad = 0;
  for (int i = 0; i < 30; ++i) {
    const bool on_ball = i % 2 == 0;
    const auto& dom = on_ball ? ball2 : dq;
    const auto zeta = on_ball ? unit(2, rng) : zeta_dq;
    HorosphereQuery<double> q{dom, zeta, 0.01, sample_interior(dom, lvl(i / 2), rng, 0.9)};
    q.use_closed_form = on_ball;
    q.R = covering_radius(q);
    props_bad += horosphere_membership(q).verdict != HoroVerdict::InSmall;
    const auto probe = horosphere_membership(q);
    std::vector<HoroVerdict> ladder;
    for (double r = probe.liminf_est / 8; r < 8 * probe.limsup_est + 1; r *= 1.25) {
      q.R = r;
      ladder.push_back(horosphere_membership(q).verdict);
    }
    for (std::size_t a = 0; a < ladder.size(); ++a)
      for (std::size_t b = a + 1; b < ladder.size(); ++b) {
        props_bad += ladder[a] == HoroVerdict::InSmall && ladder[b] != HoroVerdict::InSmall;
        props_bad += ladder[b] == HoroVerdict::Outside && ladder[a] != HoroVerdict::Outside;
      }
    q.R = probe.liminf_est / 2;
    props_bad += horosphere_membership(q).verdict != HoroVerdict::Outside;
  }
  // matrix convexity of the small horospheres
  int convex_bad = 0, convex_cases = 0;
  const std::vector<cd> e1{1.0, 0.0};
  for (int i = 0; convex_cases < 100 && i < 1000; ++i) {
    const auto z1 = random_tuple<double>(2, 1 + i % 2, 0.85, rng), z2 = random_tuple<double>(2, 1 + (i / 2) % 2, 0.85, rng);
    const double r = std::max(ball_horosphere_closed_form(e1, z1), ball_horosphere_closed_form(e1, z2)) * 1.01;
    HorosphereQuery<double> q{ball2, e1, r, z1};
    q.use_closed_form = i % 2 == 0;
    if (horosphere_membership(q).verdict != HoroVerdict::InSmall) continue;
    q.Z = z2;
    if (horosphere_membership(q).verdict != HoroVerdict::InSmall) continue;
    q.Z = direct_sum(z1, z2);
    convex_bad += horosphere_membership(q).verdict != HoroVerdict::InSmall;
    q.Z = compress(direct_sum(z1, z2), random_isometry<double>(z1.level() + z2.level(), 1 + i % (z1.level() + z2.level()), rng));
    convex_bad += horosphere_membership(q).verdict != HoroVerdict::InSmall;
    ++convex_cases;
  }
  return {agree.bad == 0 && props_bad == 0 && convex_bad == 0 && convex_cases == 100,
          "closed form vs t=1-2^-14 max " + sci(agree.worst) + " on 100; nesting/coverage/vacuity failures " +
              std::to_string(props_bad) + " on 30 points; convexity failures " + std::to_string(convex_bad) + " on " +
              std::to_string(convex_cases)};
}

Outcome wolff_inclusion() {
  WolffExperimentOptions opt;
  opt.levels = {1, 2};
  opt.triangle_triples = 200;
  opt.triangle_tol = 1e-8;
  opt.seed = 1014;
  std::string summary;
  bool ok = true;
  const auto run = [&](const std::string& name, const NcMap<long double>& f, const Domain<long double>& dom) {
    const auto rep = wolff_experiment(f, dom, 1.5L, 50, 30, opt);
    ok = ok && rep.violations.empty() && rep.samples.size() == 100 && rep.triangle.violations == 0 &&
         rep.triangle.checked == 200;
    summary += name + ": " + std::to_string(rep.violations.size()) + " violations, triangle " +
               std::to_string(rep.triangle.violations) + "/" + std::to_string(rep.triangle.checked) + "; ";
  };
  run("hyperbolic", fx::hyperbolic<long double>(), Domain<long double>::row_ball(1));
  run("f_B", fx::hyperbolic_pair<long double>(), Domain<long double>::row_ball(2));
  return {ok, "50 samples per level, 30 iterations, levels 1-2: " + summary};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lempert closed form vs definition", lempert_oracle},
      {"difference-differential identity", delta_identity},
      {"symmetry of delta tilde", symmetry},
      {"schwarz-pick contraction", schwarz_pick},
      {"chain and path metric equivalence", metric_equivalence},
      {"convex combination and isometry bounds", convex_and_isometry},
      {"ruan axioms", ruan},
      {"denjoy-wolff limits", denjoy_wolff},
      {"fixed points and ampliations", fixed_points},
      {"holomorphic retractions", retraction},
      {"bedford dichotomy", bedford},
      {"max ball boundary structure", max_ball_structure},
      {"horospheres", horospheres},
      {"wolff inclusion and triangle bound", wolff_inclusion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << o.detail << " [" << sci(secs) << " s]" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
