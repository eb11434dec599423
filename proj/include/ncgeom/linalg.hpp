#pragma once

// Dense complex linear algebra helpers shared by the geometry modules.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ncgeom/errors.hpp"

namespace ncgeom {

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <class Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Precision-dependent constants. The defect floor is 1e-14 at double
/// precision and scales with machine epsilon for other real types.
template <class Real>
struct precision {
  static constexpr Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static constexpr Real defect_floor() {
    return Real(1e-14) * (epsilon() / Real(std::numeric_limits<double>::epsilon()));
  }
};

namespace linalg {

template <class Real>
CMatrix<Real> identity(Eigen::Index n) {
  return CMatrix<Real>::Identity(n, n);
}

template <class Real>
CMatrix<Real> hermitian_part(const CMatrix<Real>& a) {
  return (a + a.adjoint()) * Real(0.5);
}

/// Largest eigenvalue of a Hermitian matrix (only the lower triangle is read).
template <class Real>
Real lambda_max(const CMatrix<Real>& h) {
  if (h.size() == 0) return Real(0);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

template <class Real>
Real lambda_min(const CMatrix<Real>& h) {
  if (h.size() == 0) return Real(0);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Spectral norm (largest singular value). Computed from the Gram matrix of
/// the smaller side, which is accurate for the largest singular value.
template <class Real>
Real op_norm(const CMatrix<Real>& a) {
  if (a.size() == 0) return Real(0);
  CMatrix<Real> gram = a.rows() <= a.cols() ? CMatrix<Real>(a * a.adjoint())
                                            : CMatrix<Real>(a.adjoint() * a);
  const Real top = lambda_max<Real>(gram);
  return std::sqrt(std::max(top, Real(0)));
}

/// max |a_ij|
template <class Real>
Real max_abs(const CMatrix<Real>& a) {
  if (a.size() == 0) return Real(0);
  return a.cwiseAbs().maxCoeff();
}

/// f(H) for Hermitian H via the eigendecomposition, f applied to eigenvalues.
template <class Real, class Fn>
CMatrix<Real> hermitian_function(const CMatrix<Real>& h, Fn&& fn) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h);
  RVector<Real> mapped = es.eigenvalues().unaryExpr(fn);
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

template <class Real>
CMatrix<Real> hermitian_sqrt(const CMatrix<Real>& h) {
  return hermitian_function<Real>(h, [](Real x) { return std::sqrt(std::max(x, Real(0))); });
}

/// H^{-1/2} for a positive definite H. Throws domain_violation when the
/// smallest eigenvalue is below the defect floor.
template <class Real>
CMatrix<Real> hermitian_inv_sqrt(const CMatrix<Real>& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h);
  const Real floor = precision<Real>::defect_floor();
  if (es.eigenvalues().minCoeff() < floor) {
    throw domain_violation("defect operator is numerically singular (smallest eigenvalue " +
                           std::to_string(static_cast<double>(es.eigenvalues().minCoeff())) +
                           ")");
  }
  RVector<Real> mapped = es.eigenvalues().unaryExpr([](Real x) { return Real(1) / std::sqrt(x); });
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

/// Defect D_T = I - T T^*.
template <class Real>
CMatrix<Real> left_defect(const CMatrix<Real>& t) {
  return identity<Real>(t.rows()) - t * t.adjoint();
}

/// Defect D_{T^*} = I - T^* T.
template <class Real>
CMatrix<Real> right_defect(const CMatrix<Real>& t) {
  return identity<Real>(t.cols()) - t.adjoint() * t;
}

/// Kronecker product a (x) b.
template <class Real>
CMatrix<Real> kron(const CMatrix<Real>& a, const CMatrix<Real>& b) {
  CMatrix<Real> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Inverse of a square matrix, with a reciprocal-condition guard. Throws
/// domain_violation when the matrix is numerically singular.
template <class Real>
CMatrix<Real> guarded_inverse(const CMatrix<Real>& a, const char* what) {
  Eigen::PartialPivLU<CMatrix<Real>> lu(a);
  const Real rc = lu.rcond();
  if (!(rc > Real(100) * precision<Real>::epsilon())) {
    throw domain_violation(std::string(what) + " is numerically singular");
  }
  return lu.inverse();
}

}  // namespace linalg
}  // namespace ncgeom
