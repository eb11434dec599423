#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ncgeom;
using Catch::Matchers::WithinAbs;
using cd = std::complex<double>;

namespace {

MatrixTuple<double> unit_plus_nilpotent(int d, double eps) {
  std::vector<CMatrix<double>> c(static_cast<std::size_t>(d), CMatrix<double>::Zero(2, 2));
  c[0] = CMatrix<double>::Identity(2, 2);
  c[1](0, 1) = eps;
  return MatrixTuple<double>(c);
}

}  // namespace

TEST_CASE("row ball origin") {
  const auto v = contains(Domain<double>::row_ball(2), MatrixTuple<double>::zero(2, 3));
  CHECK(v.status == Membership::Interior);
  CHECK(v.margin == 1.0);
}

TEST_CASE("boundary band") {
  const auto ball = Domain<double>::row_ball(2);
  const CMatrix<double> h = CMatrix<double>::Identity(2, 2) / std::sqrt(2.0);
  CHECK(contains(ball, MatrixTuple<double>({h, h})).status == Membership::Boundary);
  CHECK(contains(ball, MatrixTuple<double>({h * 1.01, h})).status == Membership::Exterior);
  CHECK(contains(ball, MatrixTuple<double>({h * 0.99, h})).status == Membership::Interior);
  CHECK(to_string(Membership::Boundary) == std::string("Boundary"));
}

TEST_CASE("max ball at level 1 is the euclidean ball") {
  const auto mb = Domain<double>::max_ball(2);
  const auto v = contains(mb, MatrixTuple<double>::scalar({0.6, 0.6}));
  CHECK(v.status == Membership::Interior);
  CHECK_THAT(v.margin, WithinAbs(1 - oracle::norm2({0.6, 0.6}), 1e-9));
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const int d = 1 + i % 3;
    const auto x = random_tuple<double>(d, 1, 0.999, rng);
    const auto z = x.scalars();
    const auto s = max_ball_support(x);
    CHECK_THAT(s.value, WithinAbs(oracle::norm2(z), 1e-9));
    // achieved at w = z/|z|
    for (int j = 0; j < d; ++j) CHECK(std::abs(s.w[j] - z[j] / oracle::norm2(z)) < 1e-6);
    CHECK_THAT(contains(Domain<double>::max_ball(d), x).margin,
               WithinAbs(contains(Domain<double>::row_ball(d), x).margin, 1e-9));
  }
}

TEST_CASE("max ball support for d = 1 matches the theta grid") {
  CHECK(max_ball_support(MatrixTuple<double>::zero(2, 3)).value == 0.0);
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const auto x = MatrixTuple<double>({random_gaussian_matrix<double>(2 + i % 3, 2 + i % 3, rng)});
    CHECK_THAT(max_ball_support(x).value, WithinAbs(oracle::theta_grid_support(x[0]), 1e-6));
  }
}

TEST_CASE("max ball rejects (I, eps E12)") {
  for (int d : {2, 3})
    for (double eps : {0.1, 0.01}) {
      const auto v = contains(Domain<double>::max_ball(d), unit_plus_nilpotent(d, eps));
      CHECK(v.status == Membership::Exterior);
    }
  // without the nilpotent part (I, 0) sits on the boundary
  CHECK(contains(Domain<double>::max_ball(2), unit_plus_nilpotent(2, 0.0)).status == Membership::Boundary);
}

TEST_CASE("row ball sits inside max ball") {
  Rng rng(33);
  const auto rb = Domain<double>::row_ball(2);
  const auto mb = Domain<double>::max_ball(2);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_tuple<double>(2, 1 + i % 3, 0.999, rng);
    CHECK(contains(mb, x).margin >= contains(rb, x).margin - 1e-12);
    CHECK(contains(mb, x).status == Membership::Interior);
  }
}

TEST_CASE("max ball membership is unitarily invariant") {
  Rng rng(34);
  const auto mb = Domain<double>::max_ball(2);
  for (int i = 0; i < 40; ++i) {
    std::vector<CMatrix<double>> c;
    for (int j = 0; j < 2; ++j) c.push_back(0.6 * random_gaussian_matrix<double>(3, 3, rng));
    const MatrixTuple<double> x(c);
    const auto u = random_unitary<double>(3, rng);
    const auto a = contains(mb, x), b = contains(mb, similarity(x, u));
    CHECK(a.status == b.status);
    CHECK_THAT(a.margin, WithinAbs(b.margin, 1e-9));
  }
}

TEST_CASE("radial scaling") {
  Rng rng(35);
  const auto x = random_tuple<double>(2, 3, 0.9, rng);
  CHECK(max_abs_diff<double>(radial_scale(x, 1.0), x) == 0.0);
  CHECK_THROWS_AS(radial_scale(x, 0.0), invalid_input);
  CHECK_THROWS_AS(radial_scale(x, 1.5), invalid_input);
  const auto ball = Domain<double>::row_ball(2);
  for (double r : {0.1, 0.5, 0.77})
    CHECK_THAT(contains(ball, radial_scale(x, r)).margin, WithinAbs(1 - r * row_norm(x), 1e-15));
}

TEST_CASE("matrix convexity of the four variants") {
  Rng rng(36);
  const std::vector<Domain<double>> doms{Domain<double>::row_ball(2), fx::pencil_dq(), fx::pencil_hl(),
                                         Domain<double>::max_ball(2)};
  for (const auto& dom : doms) {
    INFO(dom.name());
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      const auto x = sample_interior(dom, 1 + i % 2, rng, 0.99);
      const auto y = sample_interior(dom, 1 + (i / 2) % 2, rng, 0.99);
      REQUIRE(contains(dom, x).status == Membership::Interior);
      REQUIRE(contains(dom, y).status == Membership::Interior);
      CHECK(contains(dom, direct_sum(x, y)).status == Membership::Interior);
      const auto v = random_isometry<double>(x.level() + y.level(), 1 + i % 2, rng);
      CHECK(contains(dom, compress(direct_sum(x, y), v)).status == Membership::Interior);
      ++checked;
    }
    CHECK(checked == 200);
  }
}

TEST_CASE("quadratic D_Q is closed under direct sums") {
  Rng rng(37);
  const auto dom = fx::quadratic_dq();
  for (int i = 0; i < 100; ++i) {
    const auto x = sample_interior(dom, 1 + i % 3, rng, 0.99), y = sample_interior(dom, 1 + (i + 1) % 3, rng, 0.99);
    REQUIRE(contains(dom, x).status == Membership::Interior);
    CHECK(contains(dom, direct_sum(x, y)).margin == Catch::Approx(std::min(contains(dom, x).margin, contains(dom, y).margin)).margin(1e-12));
  }
}

TEST_CASE("domain construction") {
  CHECK_THROWS_AS(Domain<double>::hl(fx::matrix_poly({{"2 + x1"}}, 1)), invalid_input);
  CHECK_THROWS_AS(Domain<double>::hl(fx::matrix_poly({{"x1", "x1"}}, 1)), invalid_input);
  CHECK(fx::quadratic_dq().dim() == 2);
  CHECK(Domain<double>::row_ball(3).is_dq_type());
  CHECK(!Domain<double>::max_ball(3).is_dq_type());
  CHECK(Domain<double>::row_ball(3).name() == "row_ball");
  CHECK_THROWS_AS(contains(Domain<double>::row_ball(3), MatrixTuple<double>::zero(2, 1)), invalid_input);
}

TEST_CASE("hl margin uses the hermitian part") {
  const auto dom = Domain<double>::hl(fx::matrix_poly({{"x1"}}, 1));
  CMatrix<double> x(2, 2);
  x << cd(0.5, 0), cd(0, 3), cd(0, 3), cd(-0.2, 0);  // skew part does not count
  CHECK_THAT(contains(dom, MatrixTuple<double>({x})).margin, WithinAbs(0.5, 1e-14));
}

TEST_CASE("radial exit and boundary points") {
  Rng rng(38);
  const auto ball = Domain<double>::row_ball(2);
  const auto x = random_tuple<double>(2, 2, 0.5, rng);
  CHECK_THAT(radial_exit(ball, x), Catch::Matchers::WithinRel(1 / row_norm(x), 1e-12));
  CHECK(contains(ball, radial_boundary_point(ball, x)).status == Membership::Boundary);
  const auto dom = fx::pencil_dq();
  CHECK(contains(dom, radial_boundary_point(dom, x)).status == Membership::Boundary);
}
