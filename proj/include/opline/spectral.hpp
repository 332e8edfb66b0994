#pragma once

// Spectral probes driven by subgroup actions: eigenvalue detection through
// fixed subspaces of parabolic generators, grid sweeps, the adjunct
// membership test, and the resolvent probe.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opline/linalg.hpp"
#include "opline/mobius.hpp"
#include "opline/projective.hpp"
#include "opline/sl2.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"

namespace opline {

/// A point of the real projective line: a finite value or infinity.
struct ProjectiveReal {
  double value = 0.0;
  bool infinite = false;
};

struct EigenReport {
  ProjectiveReal lambda;
  Index multiplicity = 0;
  Subspace eigenspace;  // inside M for finite lambda, inside M^perp at infinity
};

namespace detail {

/// Null space of X^ restricted to N, where X^ is the quadratic lift of a
/// 2x2 generator. For z in N with X^ z in N the Lagrangian pairing forces
/// X^ z = 0, so the fixed subspace is exactly this null space.
inline Subspace generator_fixed_subspace(const Polarization& p, const LagrangianPoint& n,
                                         const Eigen::Matrix2d& generator) {
  const TolerancePolicy& pol = p.tolerance();
  const Matrix lifted = mu_matrix(p, generator) * n.space().basis();  // 2n x m
  Eigen::JacobiSVD<Matrix> svd(lifted, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double tau = pol.rank_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index kernel = 0;
  for (Index i = sv.size() - 1; i >= 0 && sv(i) <= tau; --i) ++kernel;
  if (kernel == 0) return Subspace::zero(p.ambient_dim(), pol);
  const Matrix fixed = n.space().basis() * svd.matrixV().rightCols(kernel);
  return Subspace(fixed, pol);
}

}  // namespace detail

inline Subspace nlambda_fixed_subspace(const Polarization& p, const LagrangianPoint& n,
                                       double lambda) {
  if (!std::isfinite(lambda)) fail(errc::bad_argument, "lambda must be finite");
  return detail::generator_fixed_subspace(p, n, generator::n_lambda(lambda));
}

inline std::optional<EigenReport> is_eigenvalue(const Polarization& p, const LagrangianPoint& n,
                                                double lambda) {
  const Subspace fixed = nlambda_fixed_subspace(p, n, lambda);
  if (fixed.rank() == 0) return std::nullopt;
  // fixed vectors are (lambda U x, x); the eigenspace is their M-part
  const Index half = p.half_dim();
  const Matrix xpart = fixed.basis().bottomRows(half);
  EigenReport rep;
  rep.lambda = {lambda, false};
  rep.multiplicity = fixed.rank();
  rep.eigenspace = orthonormalize(detail::embed_m(half, xpart), p.tolerance());
  if (rep.eigenspace.rank() != rep.multiplicity)
    fail(errc::not_compatible,
         "fixed subspace does not project injectively to M: rank " +
             std::to_string(rep.eigenspace.rank()) + " vs multiplicity " +
             std::to_string(rep.multiplicity));
  return rep;
}

/// Infinity acts through the nilpotent generator [[0,1],[0,0]]; its fixed
/// subspace is N intersect M^perp.
inline std::optional<EigenReport> infinity_eigen_test(const Polarization& p,
                                                      const LagrangianPoint& n) {
  const Subspace fixed = detail::generator_fixed_subspace(p, n, generator::n_infinity());
  if (fixed.rank() == 0) return std::nullopt;
  EigenReport rep;
  rep.lambda = {0.0, true};
  rep.multiplicity = fixed.rank();
  rep.eigenspace = fixed;
  return rep;
}

inline std::vector<EigenReport> eigen_sweep(const Polarization& p, const LagrangianPoint& n,
                                            std::vector<double> grid) {
  for (double g : grid)
    if (!std::isfinite(g)) fail(errc::bad_argument, "grid values must be finite");
  std::sort(grid.begin(), grid.end());
  std::vector<EigenReport> out;
  bool have_last = false;
  double last = 0.0;
  for (double lambda : grid) {
    if (have_last && lambda - last <= p.tolerance().angle_tol) continue;
    last = lambda;
    have_last = true;
    if (auto rep = is_eigenvalue(p, n, lambda)) out.push_back(std::move(*rep));
  }
  if (auto rep = infinity_eigen_test(p, n)) out.push_back(std::move(*rep));
  return out;
}

/// Relative-error membership test for the adjunct set around N: find w in N
/// whose M-part matches that of z, then compare the leftover M^perp-part
/// against eps times the M-part. Strict inequality; vectors with vanishing
/// M-part are never members.
inline bool adjunct_contains(const Polarization& p, const LagrangianPoint& n, double eps,
                             const Vector& z) {
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(errc::bad_epsilon, "eps must lie in (0, 1), got " + std::to_string(eps));
  p.require_ambient(z.size(), "adjunct_contains");
  require_finite(z, "z");
  if (z.norm() == 0.0) fail(errc::zero_vector, "z must be nonzero");
  const TolerancePolicy& pol = p.tolerance();
  const Index half = p.half_dim();
  const Vector xz = z.tail(half);

  const Matrix xblk = n.space().basis().bottomRows(half);
  Eigen::JacobiSVD<Matrix> svd(xblk, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector beta = svd.solve(xz);
  const double residual = (xblk * beta - xz).norm();
  if (residual > pol.rank_tol * std::max(1.0, z.norm()))
    fail(errc::chart_degenerate,
         "M-part of z is not reachable inside P_M N: residual " + std::to_string(residual));
  Vector w = n.space().basis() * beta;
  // the matching w is unique up to N_inf; absorb that slack to minimise the
  // leftover M^perp-part
  const Subspace& ninf = n.n_infinity();
  if (ninf.rank() > 0) w += ninf.basis() * (ninf.basis().transpose() * (z - w));
  const double leftover = (z - w).head(half).norm();
  return leftover < eps * xz.norm();
}

struct ProbeResult {
  double lambda = 0.0;
  double eps = 0.0;
  double t_star = 0.0;
  double sigma_est = 0.0;
  bool saturated = false;
};

/// Resolvent probe at lambda: shift N by n(-lambda), extract the operator,
/// and bisect for the smallest flow time t at which the adjunct criterion
/// (e^{2t} - 1) sigma_min <= eps fails. sigma_est inverts that relation at
/// the crossing. Saturation means the criterion holds all the way to t_max
/// (lambda is an eigenvalue to working precision).
inline ProbeResult resolvent_probe(const Polarization& p, const LagrangianPoint& n, double lambda,
                                   double eps, double t_max, double bisect_tol) {
  if (!std::isfinite(lambda)) fail(errc::bad_argument, "lambda must be finite");
  if (!(eps > 0.0) || !(eps < 1.0))
    fail(errc::bad_epsilon, "eps must lie in (0, 1), got " + std::to_string(eps));
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    fail(errc::nonpositive_parameter, "t_max must be positive");
  if (!(bisect_tol > 0.0) || !std::isfinite(bisect_tol))
    fail(errc::nonpositive_parameter, "bisect_tol must be positive");
  if (n.n_infinity().rank() > 0)
    fail(errc::nontrivial_n_infinity, "probe needs trivial N_inf, got dimension " +
                                          std::to_string(n.n_infinity().rank()));

  const Subspace shifted = act_subspace(p, subgroup::n(-lambda), n.space());
  const LagrangianPoint shifted_pt(p, shifted);
  const BiFredholmPair pair = extract_operator(p, shifted_pt);
  const Matrix tm = pair.operator_on_m();  // T - lambda I in canonical coordinates

  Eigen::JacobiSVD<Matrix> svd(tm);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);

  ProbeResult out;
  out.lambda = lambda;
  out.eps = eps;

  const auto criterion_holds = [&](double t) { return std::expm1(2.0 * t) * smin <= eps; };

  if (smin <= p.tolerance().rank_tol * smax || criterion_holds(t_max)) {
    out.saturated = true;
    out.t_star = t_max;
  } else {
    double lo = 0.0, hi = t_max;
    while (hi - lo > bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      (criterion_holds(mid) ? lo : hi) = mid;
    }
    out.t_star = 0.5 * (lo + hi);
  }
  out.sigma_est = eps / std::expm1(2.0 * out.t_star);
  return out;
}

}  // namespace opline
