#pragma once

// Points of the operator projective line: Lagrangian subspaces N with their
// cached N_0 / N_1 / N_inf splitting, the five-subspace decomposition of the
// pair (M, N), operator-graph construction, and two-chart extraction.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "opline/linalg.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"

namespace opline {

namespace detail {

/// Embed an n x k block of M-coordinates as ambient vectors (0, x).
inline Matrix embed_m(Index n, const Matrix& xblock) {
  Matrix out = Matrix::Zero(2 * n, xblock.cols());
  out.bottomRows(n) = xblock;
  return out;
}

/// Embed an n x k block of M^perp-coordinates as ambient vectors (y, 0).
inline Matrix embed_m_perp(Index n, const Matrix& yblock) {
  Matrix out = Matrix::Zero(2 * n, yblock.cols());
  out.topRows(n) = yblock;
  return out;
}

/// Orthonormal complement of the span of `parts` columns inside R^n.
/// Empty parts give the identity basis, keeping canonical coordinates for
/// points in generic position.
inline Matrix complement_in_rn(Index n, const Matrix& parts, const TolerancePolicy& policy) {
  if (parts.cols() == 0) return Matrix::Identity(n, n);
  Subspace s = orthonormalize(parts, policy);
  if (s.rank() != parts.cols())
    fail(errc::not_compatible, "block basis degenerate: rank " + std::to_string(s.rank()) +
                                   " from " + std::to_string(parts.cols()) + " columns");
  if (s.rank() == n) return Matrix(n, 0);
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - s.rank());
}

}  // namespace detail

inline bool check_compatible(const Polarization& p, const Subspace& s) {
  return is_lagrangian(p, s);
}

class LagrangianPoint {
 public:
  LagrangianPoint(const Polarization& p, Subspace space)
      : space_(std::move(space)),
        n0_(Subspace::zero(p.ambient_dim(), p.tolerance())),
        n1_(Subspace::zero(p.ambient_dim(), p.tolerance())),
        ninf_(Subspace::zero(p.ambient_dim(), p.tolerance())) {
    p.require_ambient(space_.ambient_dim(), "LagrangianPoint");
    if (!is_lagrangian(p, space_)) {
      const Matrix gram = space_.rank() == 0
                              ? Matrix::Zero(1, 1)
                              : Matrix(space_.basis().transpose() * p.omega_matrix() *
                                       space_.basis());
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "subspace is not Lagrangian: rank %ld (need %ld), ||B^T Omega B||_max = %.3e",
                    static_cast<long>(space_.rank()), static_cast<long>(p.half_dim()),
                    max_abs(gram));
      fail(errc::not_compatible, buf);
    }
    const TolerancePolicy& pol = p.tolerance();
    n0_ = intersect(space_, p.m(), pol);
    ninf_ = intersect(space_, p.m_perp(), pol);
    // N_1 = orthogonal complement of N_0 + N_inf inside N
    Matrix rest = space_.basis();
    if (n0_.rank() > 0) rest -= n0_.basis() * (n0_.basis().transpose() * space_.basis());
    if (ninf_.rank() > 0) rest -= ninf_.basis() * (ninf_.basis().transpose() * space_.basis());
    n1_ = orthonormalize(rest, pol);
    if (n0_.rank() + n1_.rank() + ninf_.rank() != space_.rank())
      fail(errc::not_compatible,
           "N_0/N_1/N_inf ranks do not add up: " + std::to_string(n0_.rank()) + " + " +
               std::to_string(n1_.rank()) + " + " + std::to_string(ninf_.rank()) +
               " != " + std::to_string(space_.rank()));
  }

  const Subspace& space() const { return space_; }
  const Subspace& n_zero() const { return n0_; }
  const Subspace& n_one() const { return n1_; }
  const Subspace& n_infinity() const { return ninf_; }

 private:
  Subspace space_, n0_, n1_, ninf_;
};

struct TwoSubspaceDecomposition {
  Subspace m00, m01, m10, m11, m0, m1;
  /// Principal angles of the generic pair (M0, N_1); empty when the generic
  /// part is trivial.
  std::vector<double> generic_angles;
};

inline TwoSubspaceDecomposition decompose(const Polarization& p, const LagrangianPoint& n) {
  const TolerancePolicy& pol = p.tolerance();
  const Index half = p.half_dim();
  const Subspace m = p.m();
  const Subspace mp = p.m_perp();
  const Subspace nperp = orthogonal_complement(n.space());

  Subspace m00 = intersect(m, n.space(), pol);
  Subspace m01 = intersect(m, nperp, pol);
  Subspace m10 = intersect(mp, n.space(), pol);
  Subspace m11 = intersect(mp, nperp, pol);

  if (m00.rank() != m11.rank() || m01.rank() != m10.rank()) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "dimension pairing violated: dim M00 = %ld vs dim M11 = %ld, dim M01 = %ld vs "
                  "dim M10 = %ld (input not numerically Lagrangian)",
                  static_cast<long>(m00.rank()), static_cast<long>(m11.rank()),
                  static_cast<long>(m01.rank()), static_cast<long>(m10.rank()));
    fail(errc::not_compatible, buf);
  }

  Matrix special_m(half, m00.rank() + m01.rank());
  if (m00.rank() > 0) special_m.leftCols(m00.rank()) = m00.basis().bottomRows(half);
  if (m01.rank() > 0) special_m.rightCols(m01.rank()) = m01.basis().bottomRows(half);
  Subspace m0(detail::embed_m(half, detail::complement_in_rn(half, special_m, pol)), pol);

  Matrix special_p(half, m10.rank() + m11.rank());
  if (m10.rank() > 0) special_p.leftCols(m10.rank()) = m10.basis().topRows(half);
  if (m11.rank() > 0) special_p.rightCols(m11.rank()) = m11.basis().topRows(half);
  Subspace m1(detail::embed_m_perp(half, detail::complement_in_rn(half, special_p, pol)), pol);

  if (m0.rank() != m1.rank())
    fail(errc::not_compatible, "generic parts disagree: dim M0 = " + std::to_string(m0.rank()) +
                                   " vs dim M1 = " + std::to_string(m1.rank()));

  TwoSubspaceDecomposition out{std::move(m00), std::move(m01), std::move(m10),
                               std::move(m11), std::move(m0),  std::move(m1),
                               {}};
  if (out.m0.rank() > 0 && n.n_one().rank() > 0)
    out.generic_angles = principal_angles(out.m0, n.n_one());
  return out;
}

/// The point span{(U T x, x) : x in M} for a symmetric T. N_inf is trivial.
inline LagrangianPoint graph_of_operator(const Polarization& p, const Matrix& t) {
  require_finite(t, "T");
  const Index n = p.half_dim();
  if (t.rows() != n || t.cols() != n)
    fail(errc::dimension_mismatch, "T must be " + std::to_string(n) + "x" + std::to_string(n) +
                                       ", got " + std::to_string(t.rows()) + "x" +
                                       std::to_string(t.cols()));
  const double sym_dev = max_abs(Matrix(t - t.transpose()));
  const double sym_tol = p.tolerance().rank_tol * std::max(1.0, max_abs(t));
  if (sym_dev > sym_tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "||T - T^T||_max = %.3e exceeds tol %.3e", sym_dev, sym_tol);
    fail(errc::not_symmetric, buf);
  }
  Matrix cols(2 * n, n);
  cols.topRows(n) = p.u() * t;
  cols.bottomRows(n) = Matrix::Identity(n, n);
  return LagrangianPoint(p, orthonormalize(cols, p.tolerance()));
}

/// Graph of T0 on the generic block, kernel block M00, and infinity block
/// M01: N = {(U T^ x, x) : x in M0 + M00} + {(U m, 0) : m in M01}.
inline LagrangianPoint graph_extended(const Polarization& p, const Matrix& t0,
                                      const Subspace& m00, const Subspace& m01) {
  const TolerancePolicy& pol = p.tolerance();
  const Index n = p.half_dim();
  p.require_ambient(m00.ambient_dim(), "graph_extended M00");
  p.require_ambient(m01.ambient_dim(), "graph_extended M01");
  require_finite(t0, "T0");

  // both blocks must lie inside M (vanishing M^perp part)
  for (const auto* blk : {&m00, &m01}) {
    if (blk->rank() == 0) continue;
    const double leak = max_abs(Matrix(blk->basis().topRows(n)));
    if (leak > pol.angle_tol)
      fail(errc::inconsistent_blocks,
           "block not contained in M: M^perp leakage " + std::to_string(leak));
  }
  if (m00.rank() > 0 && m01.rank() > 0) {
    const double overlap =
        max_abs(Matrix(m00.basis().transpose() * m01.basis()));
    if (overlap > pol.angle_tol)
      fail(errc::inconsistent_blocks,
           "M00 and M01 are not orthogonal: max overlap " + std::to_string(overlap));
  }

  const Index k = m00.rank(), l = m01.rank(), r = n - k - l;
  if (r < 0)
    fail(errc::inconsistent_blocks, "blocks exceed dim M: " + std::to_string(k) + " + " +
                                        std::to_string(l) + " > " + std::to_string(n));
  if (t0.rows() != r || t0.cols() != r)
    fail(errc::inconsistent_blocks, "T0 must be " + std::to_string(r) + "x" + std::to_string(r) +
                                        ", got " + std::to_string(t0.rows()) + "x" +
                                        std::to_string(t0.cols()));
  if (r > 0) {
    const double sym_dev = max_abs(Matrix(t0 - t0.transpose()));
    if (sym_dev > pol.rank_tol * std::max(1.0, max_abs(t0)))
      fail(errc::inconsistent_blocks, "T0 not symmetric: deviation " + std::to_string(sym_dev));
    Eigen::JacobiSVD<Matrix> svd(t0);
    const double smin = svd.singularValues()(r - 1);
    if (smin <= pol.rank_tol * std::max(1.0, svd.singularValues()(0)))
      fail(errc::inconsistent_blocks,
           "T0 singular on its block: sigma_min = " + std::to_string(smin));
  }

  Matrix special(n, k + l);
  if (k > 0) special.leftCols(k) = m00.basis().bottomRows(n);
  if (l > 0) special.rightCols(l) = m01.basis().bottomRows(n);
  const Matrix b0 = detail::complement_in_rn(n, special, pol);  // n x r

  Matrix cols(2 * n, n);
  // generic graph part, kernel part, infinity part
  if (r > 0) {
    cols.block(0, 0, n, r) = p.u() * (b0 * t0);
    cols.block(n, 0, n, r) = b0;
  }
  if (k > 0) {
    cols.block(0, r, n, k).setZero();
    cols.block(n, r, n, k) = m00.basis().bottomRows(n);
  }
  if (l > 0) {
    cols.block(0, r + k, n, l) = p.u() * m01.basis().bottomRows(n);
    cols.block(n, r + k, n, l).setZero();
  }
  return LagrangianPoint(p, orthonormalize(cols, pol));
}

/// The two chart operators of a point. t_hat acts on M0 + M00 in the
/// adapted basis recorded by basis_hat (columns: M0 basis then M00 basis);
/// t_check acts on M1 + M10 via basis_check.
struct BiFredholmPair {
  Matrix t_hat;
  Matrix t_check;
  Matrix basis_hat;    // 2n x (r+k), columns inside M
  Matrix basis_check;  // 2n x (r+l), columns inside M^perp
  Subspace dom_hat;
  Subspace dom_check;
  Index generic_rank = 0;
  Index half_dim = 0;

  /// t_hat in canonical M coordinates; requires the hat domain to be all of
  /// M (trivial N_inf).
  Matrix operator_on_m() const {
    if (t_hat.rows() != half_dim)
      fail(errc::nontrivial_n_infinity,
           "hat chart covers only " + std::to_string(t_hat.rows()) + " of " +
               std::to_string(half_dim) + " M-directions");
    const Matrix bx = basis_hat.bottomRows(half_dim);
    return bx * t_hat * bx.transpose();
  }

  /// t_check in canonical M^perp coordinates; requires the check domain to
  /// be all of M^perp (trivial N_0).
  Matrix operator_on_m_perp() const {
    if (t_check.rows() != half_dim)
      fail(errc::chart_degenerate,
           "check chart covers only " + std::to_string(t_check.rows()) + " of " +
               std::to_string(half_dim) + " M^perp-directions");
    const Matrix by = basis_check.topRows(half_dim);
    return by * t_check * by.transpose();
  }
};

inline BiFredholmPair extract_operator(const Polarization& p, const LagrangianPoint& n,
                                       double cond_bound = 1e8) {
  const TolerancePolicy& pol = p.tolerance();
  const Index half = p.half_dim();
  const TwoSubspaceDecomposition dec = decompose(p, n);
  const Index r = dec.m0.rank();
  const Index k = dec.m00.rank();
  const Index l = dec.m10.rank();

  const Matrix b1 = n.n_one().basis();      // 2n x m, m = r
  const Matrix yblk = b1.topRows(half);     // M^perp components
  const Matrix xblk = b1.bottomRows(half);  // M components
  if (n.n_one().rank() != r)
    fail(errc::not_compatible, "generic part rank " + std::to_string(n.n_one().rank()) +
                                   " does not match dim M0 = " + std::to_string(r));

  Matrix t_gen(0, 0), t_gen_chk(0, 0);
  if (r > 0) {
    const Matrix b0x = dec.m0.basis().bottomRows(half);  // n x r
    const Matrix b1y = dec.m1.basis().topRows(half);     // n x r

    auto solve_chart = [&](const Matrix& proj, const Matrix& target, const Matrix& range,
                           const char* chart) -> Matrix {
      // proj: n x r block of N_1 on the domain side; target: n x r adapted
      // domain basis; range: n x r image of the complementary block under U
      Eigen::JacobiSVD<Matrix> svd(proj, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double smax = svd.singularValues()(0);
      const double smin = svd.singularValues()(svd.singularValues().size() - 1);
      if (!(smin > 0.0) || smax / smin > cond_bound) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s chart solve has condition %.3e (bound %.3e); offending principal angle "
                      "%.6e rad from the domain",
                      chart, smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity(),
                      cond_bound, std::acos(std::clamp(smin, 0.0, 1.0)));
        fail(errc::ill_conditioned_chart, buf);
      }
      const Matrix w = svd.solve(target);  // proj * w = target
      const double residual = max_abs(Matrix(proj * w - target));
      if (residual > 1e-8)
        fail(errc::not_compatible,
             std::string(chart) + " chart solve inconsistent: residual " +
                 std::to_string(residual));
      Matrix t = target.transpose() * (range * w);
      const double asym = max_abs(Matrix(t - t.transpose()));
      const double asym_tol =
          pol.rank_tol * std::max(1.0, max_abs(t)) * std::max(1.0, smax / smin);
      if (asym > asym_tol) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "%s chart operator asymmetry %.3e exceeds tol %.3e (input not numerically "
                      "Lagrangian)",
                      chart, asym, asym_tol);
        fail(errc::not_compatible, buf);
      }
      return Matrix(0.5 * (t + t.transpose()));
    };

    t_gen = solve_chart(xblk, b0x, p.u().transpose() * yblk, "hat");
    t_gen_chk = solve_chart(yblk, b1y, p.u() * xblk, "check");
  }

  BiFredholmPair out;
  out.generic_rank = r;
  out.half_dim = half;

  out.t_hat = Matrix::Zero(r + k, r + k);
  if (r > 0) out.t_hat.topLeftCorner(r, r) = t_gen;
  out.basis_hat = Matrix(2 * half, r + k);
  if (r > 0) out.basis_hat.leftCols(r) = dec.m0.basis();
  if (k > 0) out.basis_hat.rightCols(k) = dec.m00.basis();
  out.dom_hat = subspace_sum(dec.m0, dec.m00, pol);

  out.t_check = Matrix::Zero(r + l, r + l);
  if (r > 0) out.t_check.topLeftCorner(r, r) = t_gen_chk;
  out.basis_check = Matrix(2 * half, r + l);
  if (r > 0) out.basis_check.leftCols(r) = dec.m1.basis();
  if (l > 0) out.basis_check.rightCols(l) = dec.m10.basis();
  out.dom_check = subspace_sum(dec.m1, dec.m10, pol);

  return out;
}

}  // namespace opline
