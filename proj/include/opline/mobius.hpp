#pragma once

// The action of 2x2 matrices on the polarised space: mu(g) = [[a I, b U],
// [c U^T, d I]] in the (y, x) convention, its action on vectors and
// subspaces, the direct linear-fractional formula on symmetric operators,
// and orbit classification.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opline/linalg.hpp"
#include "opline/sl2.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"

namespace opline {

/// Block matrix of the action for an arbitrary 2x2 coefficient matrix.
/// Linear in the coefficients, so it also serves subgroup generators.
inline Matrix mu_matrix(const Polarization& p, const Eigen::Matrix2d& g) {
  const Index n = p.half_dim();
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = g(0, 0) * Matrix::Identity(n, n);
  m.topRightCorner(n, n) = g(0, 1) * p.u();
  m.bottomLeftCorner(n, n) = g(1, 0) * p.u().transpose();
  m.bottomRightCorner(n, n) = g(1, 1) * Matrix::Identity(n, n);
  return m;
}

inline Matrix mu_matrix(const Polarization& p, const GroupElement& g) {
  return mu_matrix(p, g.matrix());
}

/// mu(g) z, computed blockwise: (a y + b U x, c U^T y + d x).
inline Vector act_vector(const Polarization& p, const GroupElement& g, const Vector& z) {
  p.require_ambient(z.size(), "act_vector");
  require_finite(z, "vector");
  const Index n = p.half_dim();
  Vector out(2 * n);
  out.head(n) = g.a * z.head(n) + g.b * (p.u() * z.tail(n));
  out.tail(n) = g.c * (p.u().transpose() * z.head(n)) + g.d * z.tail(n);
  return out;
}

inline Subspace act_subspace(const Polarization& p, const GroupElement& g, const Subspace& s) {
  p.require_ambient(s.ambient_dim(), "act_subspace");
  if (s.rank() == 0) return s;
  const Index n = p.half_dim();
  Matrix image(2 * n, s.rank());
  image.topRows(n) = g.a * s.basis().topRows(n) + g.b * (p.u() * s.basis().bottomRows(n));
  image.bottomRows(n) =
      g.c * (p.u().transpose() * s.basis().topRows(n)) + g.d * s.basis().bottomRows(n);
  return orthonormalize(image, p.tolerance());
}

/// (c T + d I)^{-1} (a T + b I). For symmetric T both orders agree; we keep
/// the left-divide order and tests assert the equality.
inline Matrix linear_fractional_operator(const GroupElement& g, const Matrix& t,
                                         const TolerancePolicy& policy = {},
                                         double denominator_floor = 1e-12) {
  policy.validate();
  require_finite(t, "T");
  if (t.rows() != t.cols())
    fail(errc::dimension_mismatch, "T must be square, got " + std::to_string(t.rows()) + "x" +
                                       std::to_string(t.cols()));
  const double sym_dev = max_abs(Matrix(t - t.transpose()));
  if (sym_dev > policy.rank_tol * std::max(1.0, max_abs(t))) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||T - T^T||_max = %.3e exceeds tol %.3e", sym_dev,
                  policy.rank_tol * std::max(1.0, max_abs(t)));
    fail(errc::not_symmetric, buf);
  }
  const Index n = t.rows();
  const Matrix den = g.c * t + g.d * Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(den);
  const double smin = svd.singularValues()(n - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= denominator_floor * std::max(1.0, smax)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "sigma_min(cT + dI) = %.3e at or below floor %.3e (-d/c touches the spectrum)",
                  smin, denominator_floor * std::max(1.0, smax));
    fail(errc::singular_denominator, buf);
  }
  const Matrix num = g.a * t + g.b * Matrix::Identity(n, n);
  return den.partialPivLu().solve(num);
}

enum class OrbitKind { planar, generic };

struct OrbitClassification {
  OrbitKind kind;
  /// Planar only: the invariant 2-plane certified to contain the whole orbit.
  Subspace plane;
  /// Generic only: the four spanning directions
  /// {P_M z, U P_M z, P_{M^perp} z, U^T P_{M^perp} z} as ambient vectors.
  std::vector<Vector> directions;
};

/// Orbit dichotomy: planar iff U(P_M z) and P_{M^perp} z are collinear
/// (angle <= angle_tol, the zero vector collinear with everything).
inline OrbitClassification orbit_classify(const Polarization& p, const Vector& z) {
  p.require_ambient(z.size(), "orbit_classify");
  require_finite(z, "vector");
  if (z.norm() == 0.0) fail(errc::zero_vector, "orbit of the zero vector is trivial");

  const Index n = p.half_dim();
  const Vector y = z.head(n);
  const Vector x = z.tail(n);
  const Vector ux = p.u() * x;

  const double ny = y.norm();
  const double nux = ux.norm();
  bool planar;
  if (ny == 0.0 || nux == 0.0) {
    planar = true;
  } else {
    // sine of the angle between the lines spanned by ux and y
    const Vector r = ux / nux - (ux.dot(y) / (nux * ny * ny)) * y;
    planar = std::asin(std::min(1.0, r.norm())) <= p.tolerance().angle_tol;
  }

  OrbitClassification out{planar ? OrbitKind::planar : OrbitKind::generic,
                          Subspace::zero(2 * n, p.tolerance()),
                          {}};
  if (planar) {
    Matrix span(2 * n, 2);
    span.setZero();
    if (x.norm() > 0.0) {
      span.col(0).head(n) = ux;          // (U x, 0)
      span.col(1).tail(n) = x;           // (0, x)
    } else {
      span.col(0).head(n) = y;                          // (y, 0)
      span.col(1).tail(n) = p.u().transpose() * y;      // (0, U^T y)
    }
    out.plane = orthonormalize(span, p.tolerance());
  } else {
    Vector pm = Vector::Zero(2 * n), upm = Vector::Zero(2 * n);
    Vector pp = Vector::Zero(2 * n), upp = Vector::Zero(2 * n);
    pm.tail(n) = x;
    upm.head(n) = ux;
    pp.head(n) = y;
    upp.tail(n) = p.u().transpose() * y;
    out.directions = {pm, upm, pp, upp};
  }
  return out;
}

}  // namespace opline
