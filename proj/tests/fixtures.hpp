#pragma once
// Test maps and domains shared by the unit suites and the acceptance runner.

#include <ncgeom.hpp>

#include <numbers>
#include <string>
#include <vector>

namespace fx {

using namespace ncgeom;
using cd = std::complex<double>;

inline NcMap<double> poly(const std::vector<std::string>& outs, int d) {
  std::vector<FreePolynomial<double>> o;
  for (const auto& s : outs) o.push_back(parse_polynomial(s, d));
  return NcMap<double>::polynomial(std::move(o));
}

inline NcMap<double> matrix_poly(const std::vector<std::vector<std::string>>& grid, int d) {
  std::vector<std::vector<FreePolynomial<double>>> g;
  for (const auto& row : grid) {
    g.emplace_back();
    for (const auto& s : row) g.back().push_back(parse_polynomial(s, d));
  }
  return NcMap<double>::matrix_poly(static_cast<int>(grid.size()), static_cast<int>(grid.front().size()), std::move(g));
}

/// f(z) = (z + 1/2)/(1 + z/2) = -Phi_{-1/2}(z).
template <class Real = double>
NcMap<Real> hyperbolic() {
  return NcMap<Real>::affine({{Complex<Real>(-1), NcMap<Real>::mobius({Complex<Real>(Real(-0.5))})}});
}

/// f(z1, z2) = -Phi_{(-1/2, 0)}(z1, z2/2); no interior fixed point, boundary
/// attractor (1, 0).
template <class Real = double>
NcMap<Real> hyperbolic_pair() {
  const auto shrink = poly({"x1", "0.5*x2"}, 2).cast<Real>();
  const auto phi = NcMap<Real>::mobius({Complex<Real>(Real(-0.5)), Complex<Real>(0)});
  return NcMap<Real>::compose(NcMap<Real>::affine({{Complex<Real>(-1), phi}}), shrink);
}

/// ((z1 + 1/2)/(1 + z1/2), z2/2).
inline NcMap<double> hyperbolic_product() {
  const auto first = NcMap<double>::compose(hyperbolic<double>(), poly({"x1"}, 2));
  const auto lift = NcMap<double>::compose(poly({"x1", "0"}, 1), first);
  return NcMap<double>::affine({{1.0, lift}, {1.0, poly({"0", "0.5*x2"}, 2)}});
}

inline NcMap<double> rotation(int d, double theta) {
  CMatrix<double> m = CMatrix<double>::Identity(d, d);
  m(d - 1, d - 1) = std::exp(cd(0, theta));
  return linear_map<double>(m);
}

/// Linear part U diag(1,..,1,lambda,..) U^* with a right-multiplied
/// quadratic term in the contracting coordinates; Fix equals the
/// eigenvalue-1 eigenspace intersected with the ball.
inline NcMap<double> fixed_space_map(int d, int keep, Rng& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<FreePolynomial<double>> outs;
  for (int k = 1; k <= d; ++k) {
    auto p = FreePolynomial<double>::coordinate(d, k - 1);
    if (k > keep) {
      const double lam = 0.2 + 0.5 * u(rng);
      const double c = (1 - lam) * 0.8 * u(rng);
      p = FreePolynomial<double>::coordinate(d, k - 1, std::polar(lam, 6 * u(rng)));
      p.add_term({k - 1, 0}, cd(c));
    }
    outs.push_back(std::move(p));
  }
  const CMatrix<double> rot = random_unitary<double>(d, rng);
  const auto h = NcMap<double>::polynomial(std::move(outs));
  // Z'_k = sum_j M(k,j) Z_j; conj by the coordinate rotation.
  return NcMap<double>::compose(linear_map<double>(rot), NcMap<double>::compose(h, linear_map<double>(rot.adjoint())));
}

/// A random holomorphic self-map of the row ball: compositions and convex
/// combinations of automorphisms, contractive linear maps and Z -> Z_1 Z.
inline NcMap<double> random_ball_self_map(int d, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> u(0, 1);
  auto elementary = [&]() -> NcMap<double> {
    switch (pick(rng)) {
      case 0: {
        CMatrix<double> g = random_gaussian_matrix<double>(d, 1, rng);
        const double r = 0.8 * u(rng) / g.norm();
        std::vector<cd> a;
        for (int j = 0; j < d; ++j) a.push_back(r * g(j, 0));
        return NcMap<double>::mobius(a);
      }
      case 1: {
        Eigen::JacobiSVD<CMatrix<double>> svd(random_gaussian_matrix<double>(d, d, rng),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        CMatrix<double> s = CMatrix<double>::Zero(d, d);
        for (int j = 0; j < d; ++j) s(j, j) = 0.3 + 0.7 * u(rng);
        return linear_map<double>(svd.matrixU() * s * svd.matrixV().adjoint());
      }
      case 2: {
        std::vector<std::string> outs;
        for (int j = 1; j <= d; ++j) outs.push_back("x1x" + std::to_string(j));
        return poly(outs, d);
      }
      default: {
        const CMatrix<double> uu = random_unitary<double>(d, rng);
        return linear_map<double>(uu);
      }
    }
  };
  NcMap<double> f = elementary();
  const int depth = 1 + static_cast<int>(u(rng) * 3);
  for (int i = 0; i < depth; ++i) f = NcMap<double>::compose(elementary(), f);
  if (u(rng) < 0.3) {
    const double t = 0.2 + 0.6 * u(rng);
    f = NcMap<double>::affine({{t, f}, {1 - t, elementary()}});
  }
  return f;
}

/// D_Q with a 1 x 2 quadratic Q, Q(0) = 0.
inline Domain<double> quadratic_dq() {
  return Domain<double>::dq(matrix_poly({{"0.8*x1 + 0.3*x1x2", "0.7*x2 - 0.2*x2x1"}}, 2));
}

/// D_Q with a linear 2 x 2 pencil Q (matrix convex).
inline Domain<double> pencil_dq() {
  return Domain<double>::dq(matrix_poly({{"0.9*x1", "0.4*x2"}, {"(0+0.3i)*x2", "0.6*x1 - 0.5*x2"}}, 2));
}

/// H_L with a 2 x 2 quadratic L, Re L(0) = 0.
inline Domain<double> quadratic_hl() {
  return Domain<double>::hl(matrix_poly({{"0.9*x1 + 0.2*x1x1", "0.5*x2"}, {"(0-0.4i)*x1", "0.7*x2 + 0.3*x2x1"}}, 2));
}

/// H_L with a linear 2 x 2 pencil L (matrix convex).
inline Domain<double> pencil_hl() {
  return Domain<double>::hl(matrix_poly({{"1*x1", "0.5*x2"}, {"(0+0.5i)*x2", "0.8*x1 - 0.3*x2"}}, 2));
}

inline std::vector<MatrixTuple<double>> samples(const Domain<double>& dom, int count, Rng& rng, double frac = 0.9,
                                                int max_level = 3) {
  std::vector<MatrixTuple<double>> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_interior(dom, 1 + i % max_level, rng, frac));
  return out;
}

}  // namespace fx
