#pragma once

// Polarised symplectic structure on R^(2n): reference Lagrangian M, the
// isometry U: M -> M^perp, the block map W, the form omega, and recovery of
// U from a raw skew form.
//
// Coordinate convention everywhere: z = (y, x), y in M^perp occupying
// entries 1..n, x in M occupying entries n+1..2n.

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "opline/linalg.hpp"
#include "opline/subspace.hpp"
#include "opline/tolerance.hpp"

namespace opline {

class Polarization {
 public:
  Polarization(Matrix u, TolerancePolicy policy)
      : u_(std::move(u)), policy_(policy) {
    n_ = u_.rows();
  }

  Index half_dim() const { return n_; }
  Index ambient_dim() const { return 2 * n_; }
  const Matrix& u() const { return u_; }
  const TolerancePolicy& tolerance() const { return policy_; }

  /// Reference Lagrangian M = span(e_{n+1}..e_{2n}).
  Subspace m() const {
    Matrix basis = Matrix::Zero(2 * n_, n_);
    basis.bottomRows(n_).setIdentity();
    return Subspace(std::move(basis), policy_);
  }

  /// M^perp = span(e_1..e_n).
  Subspace m_perp() const {
    Matrix basis = Matrix::Zero(2 * n_, n_);
    basis.topRows(n_).setIdentity();
    return Subspace(std::move(basis), policy_);
  }

  /// W = [[0, U], [-U^T, 0]]; W^2 = -I.
  Matrix w() const {
    Matrix w = Matrix::Zero(2 * n_, 2 * n_);
    w.topRightCorner(n_, n_) = u_;
    w.bottomLeftCorner(n_, n_) = -u_.transpose();
    return w;
  }

  /// Matrix of the form: omega(z, z') = z^T Omega z' with Omega = W^T.
  Matrix omega_matrix() const { return w().transpose(); }

  Vector y_part(const Vector& z) const {
    require_ambient(z.size(), "y_part");
    return z.head(n_);
  }
  Vector x_part(const Vector& z) const {
    require_ambient(z.size(), "x_part");
    return z.tail(n_);
  }

  Vector assemble(const Vector& y, const Vector& x) const {
    if (y.size() != n_ || x.size() != n_)
      fail(errc::dimension_mismatch, "assemble: part lengths " + std::to_string(y.size()) +
                                         ", " + std::to_string(x.size()) + " vs half dimension " +
                                         std::to_string(n_));
    Vector z(2 * n_);
    z.head(n_) = y;
    z.tail(n_) = x;
    return z;
  }

  void require_ambient(Index len, const char* what) const {
    if (len != 2 * n_)
      fail(errc::dimension_mismatch,
           std::string(what) + ": length " + std::to_string(len) + " vs ambient " +
               std::to_string(2 * n_));
  }

 private:
  Matrix u_;
  Index n_;
  TolerancePolicy policy_;
};

inline Polarization build_polarization(const Matrix& u, const TolerancePolicy& policy = {}) {
  policy.validate();
  require_finite(u, "U");
  if (u.rows() != u.cols() || u.rows() < 1)
    fail(errc::dimension_mismatch,
         "U must be square and nonempty, got " + std::to_string(u.rows()) + "x" +
             std::to_string(u.cols()));
  const double dev = max_abs(Matrix(u.transpose() * u - Matrix::Identity(u.cols(), u.cols())));
  if (dev > policy.rank_tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||U^T U - I||_max = %.3e exceeds tol %.3e", dev,
                  policy.rank_tol);
    fail(errc::not_orthogonal, buf);
  }
  return Polarization(u, policy);
}

/// omega(z1; z2) = <W z1, z2> = <U x1, y2> - <U^T y1, x2>.
inline double omega(const Polarization& p, const Vector& z1, const Vector& z2) {
  p.require_ambient(z1.size(), "omega z1");
  p.require_ambient(z2.size(), "omega z2");
  const Index n = p.half_dim();
  return (p.u() * z1.tail(n)).dot(z2.head(n)) - (p.u().transpose() * z1.head(n)).dot(z2.tail(n));
}

inline bool is_isotropic(const Polarization& p, const Subspace& s) {
  p.require_ambient(s.ambient_dim(), "is_isotropic");
  if (s.rank() == 0) return true;
  const Matrix form = s.basis().transpose() * p.omega_matrix() * s.basis();
  return max_abs(form) <= p.tolerance().rank_tol;
}

inline bool is_lagrangian(const Polarization& p, const Subspace& s) {
  p.require_ambient(s.ambient_dim(), "is_lagrangian");
  return s.rank() == p.half_dim() && is_isotropic(p, s);
}

/// {z : omega(z; z') = 0 for all z' in S}. dim = 2n - rank(S).
inline Subspace symplectic_complement(const Polarization& p, const Subspace& s) {
  p.require_ambient(s.ambient_dim(), "symplectic_complement");
  const Index d = 2 * p.half_dim();
  if (s.rank() == 0) return Subspace::full(d, p.tolerance());
  // B_S^T Omega has every singular value equal to 1 (Omega orthogonal,
  // basis orthonormal), so the rank/kernel split is exact
  const Matrix a = s.basis().transpose() * p.omega_matrix();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  return Subspace(svd.matrixV().rightCols(d - s.rank()), p.tolerance());
}

/// Result of recovering a polarization from a raw form: the Polarization in
/// the adapted basis [B_{M^perp} | B_M], plus that basis.
struct UFromOmegaResult {
  Polarization polarization;
  Matrix adapted_basis;  // 2n x 2n, columns: M^perp basis then M basis

  /// U as an operator on the original coordinates: maps M into M^perp,
  /// annihilates M^perp. Independent of the adapted-basis gauge.
  Matrix u_embedded() const {
    const Index n = polarization.half_dim();
    const Matrix bp = adapted_basis.leftCols(n);
    const Matrix bm = adapted_basis.rightCols(n);
    return bp * polarization.u() * bm.transpose();
  }
};

/// Prop.-1 pairing: the unique U: M -> M^perp with <z, x> = omega(z, U x)
/// for all z, x in M. The standing unitarity assumption is checked, never
/// repaired by rescaling.
inline UFromOmegaResult u_from_omega(const Matrix& omega_mat, const Subspace& m,
                                     const TolerancePolicy& policy = {}) {
  policy.validate();
  require_finite(omega_mat, "Omega");
  const Index d = omega_mat.rows();
  if (omega_mat.cols() != d || d < 2 || d % 2 != 0)
    fail(errc::dimension_mismatch,
         "Omega must be square of even dimension, got " + std::to_string(d) + "x" +
             std::to_string(omega_mat.cols()));
  if (m.ambient_dim() != d)
    fail(errc::dimension_mismatch, "M lives in dimension " + std::to_string(m.ambient_dim()) +
                                       ", Omega in " + std::to_string(d));
  const Index n = d / 2;
  const double scale = std::max(1.0, max_abs(omega_mat));

  const double skew_dev = max_abs(Matrix(omega_mat + omega_mat.transpose()));
  if (skew_dev > policy.rank_tol * scale) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||Omega + Omega^T||_max = %.3e exceeds tol %.3e", skew_dev,
                  policy.rank_tol * scale);
    fail(errc::not_skew, buf);
  }

  Eigen::JacobiSVD<Matrix> osvd(omega_mat);
  const double smin = osvd.singularValues()(d - 1);
  const double smax = osvd.singularValues()(0);
  if (smin <= policy.rank_tol * std::max(smax, 1.0)) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "sigma_min(Omega) = %.3e below tol %.3e", smin,
                  policy.rank_tol * std::max(smax, 1.0));
    fail(errc::degenerate_form, buf);
  }

  if (m.rank() != n)
    fail(errc::not_lagrangian, "M has rank " + std::to_string(m.rank()) + ", expected " +
                                   std::to_string(n));
  const double iso_dev = max_abs(Matrix(m.basis().transpose() * omega_mat * m.basis()));
  if (iso_dev > policy.rank_tol * scale) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||B_M^T Omega B_M||_max = %.3e exceeds tol %.3e", iso_dev,
                  policy.rank_tol * scale);
    fail(errc::not_lagrangian, buf);
  }

  const Subspace mperp = orthogonal_complement(m);
  const Matrix bm = m.basis();
  const Matrix bp = mperp.basis();

  // an adapted polarization exists only if the orthogonal complement is
  // isotropic as well
  const double perp_dev = max_abs(Matrix(bp.transpose() * omega_mat * bp));
  if (perp_dev > policy.rank_tol * scale) {
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "orthogonal complement of M is not isotropic: deviation %.3e (tol %.3e)",
                  perp_dev, policy.rank_tol * scale);
    fail(errc::not_lagrangian, buf);
  }

  // in the adapted frame the form must be [[0, -U],[U^T, 0]], so the mixed
  // block B_M^T Omega B_P is U^T; U is defined up to the complement's gauge
  const Matrix uhat = (bm.transpose() * omega_mat * bp).transpose();

  const double unit_dev = max_abs(Matrix(uhat.transpose() * uhat - Matrix::Identity(n, n)));
  const double unit_tol = policy.rank_tol * std::max(1.0, max_abs(uhat));
  if (unit_dev > unit_tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||U^T U - I||_max = %.3e exceeds tol %.3e", unit_dev,
                  unit_tol);
    fail(errc::not_unitary, buf);
  }

  Matrix adapted(d, d);
  adapted.leftCols(n) = bp;
  adapted.rightCols(n) = bm;
  return UFromOmegaResult{build_polarization(uhat, policy), std::move(adapted)};
}

}  // namespace opline
