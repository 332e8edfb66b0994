#pragma once

// Dense subspace arithmetic: orthonormal bases, projections, intersections,
// sums, complements, principal angles. Rank decisions are relative
// (rank_tol * sigma_max); subspace comparisons are angle based (angle_tol).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opline/errors.hpp"
#include "opline/linalg.hpp"
#include "opline/tolerance.hpp"

namespace opline {

class Subspace {
 public:
  /// Empty placeholder (ambient dimension 0) so result structs can be
  /// default-constructed; real subspaces come from the other constructors.
  Subspace() : basis_(0, 0), tol_(TolerancePolicy{}.rank_tol) {}

  /// Wraps an already-orthonormal basis. Verifies ||B^T B - I||_max <= tol.
  Subspace(Matrix basis, const TolerancePolicy& policy = {})
      : basis_(std::move(basis)), tol_(policy.rank_tol) {
    policy.validate();
    require_finite(basis_, "subspace basis");
    if (basis_.cols() > basis_.rows())
      fail(errc::dimension_mismatch,
           "basis has more columns than ambient dimension (" +
               std::to_string(basis_.cols()) + " > " + std::to_string(basis_.rows()) + ")");
    if (basis_.cols() > 0) {
      const double dev = max_abs(Matrix(basis_.transpose() * basis_ -
                                        Matrix::Identity(basis_.cols(), basis_.cols())));
      // orthonormality is an invariant, not something we silently repair
      const double bound = std::max(tol_, 1e-12);
      if (dev > bound)
        fail(errc::not_orthogonal,
             "basis columns deviate from orthonormal by " + format_sci(dev) +
                 " (allowed " + format_sci(bound) + ")");
    }
  }

  static Subspace zero(Index ambient_dim, const TolerancePolicy& policy = {}) {
    return Subspace(Matrix(ambient_dim, 0), policy);
  }

  static Subspace full(Index ambient_dim, const TolerancePolicy& policy = {}) {
    return Subspace(Matrix::Identity(ambient_dim, ambient_dim), policy);
  }

  Index ambient_dim() const { return basis_.rows(); }
  Index rank() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  double tol() const { return tol_; }

 private:
  static std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
  }

  Matrix basis_;
  double tol_;
};

namespace detail {

inline void require_same_ambient(const Subspace& a, const Subspace& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim())
    fail(errc::dimension_mismatch,
         std::string(op) + ": ambient dimensions differ (" +
             std::to_string(a.ambient_dim()) + " vs " + std::to_string(b.ambient_dim()) + ")");
}

// Principal angles with small-angle refinement. Raw acos of an overlap
// singular value cannot resolve angles below ~1.5e-8, which is coarser than
// the default angle_tol; for cosines near 1 the sine-based formula
// 2*asin(|u - w|/2) recovers full precision.
inline std::vector<double> principal_angles_impl(const Matrix& ba, const Matrix& bb) {
  const Index r = std::min(ba.cols(), bb.cols());
  std::vector<double> angles(static_cast<size_t>(r));
  if (r == 0) return angles;
  Matrix overlap = ba.transpose() * bb;
  Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  for (Index i = 0; i < r; ++i) {
    const double c = std::clamp(sv(i), -1.0, 1.0);
    double theta;
    if (c > 0.7) {
      Vector u = ba * svd.matrixU().col(i);
      Vector w = bb * svd.matrixV().col(i);
      const double half = 0.5 * (u - w).norm();
      theta = 2.0 * std::asin(std::min(1.0, half));
    } else {
      theta = std::acos(c);
    }
    angles[static_cast<size_t>(i)] = theta;
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace detail

/// Orthonormal basis of the column space; rank via sigma_i >= rank_tol * sigma_max.
inline Subspace orthonormalize(const Matrix& vectors, const TolerancePolicy& policy = {}) {
  policy.validate();
  require_finite(vectors, "input vectors");
  if (vectors.rows() < 1)
    fail(errc::dimension_mismatch, "ambient dimension must be >= 1");
  if (vectors.cols() == 0) return Subspace::zero(vectors.rows(), policy);

  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index rank = 0;
  if (smax > 0.0) {
    const double cutoff = policy.rank_tol * smax;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) >= cutoff) ++rank;
  }
  if (rank == 0) return Subspace::zero(vectors.rows(), policy);
  return Subspace(svd.matrixU().leftCols(rank), policy);
}

inline Vector project(const Subspace& s, const Vector& v) {
  if (v.size() != s.ambient_dim())
    fail(errc::dimension_mismatch,
         "project: vector length " + std::to_string(v.size()) + " vs ambient " +
             std::to_string(s.ambient_dim()));
  require_finite(v, "vector");
  if (s.rank() == 0) return Vector::Zero(s.ambient_dim());
  return s.basis() * (s.basis().transpose() * v);
}

inline std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  detail::require_same_ambient(a, b, "principal_angles");
  if (a.rank() == 0 || b.rank() == 0)
    fail(errc::empty_subspace, "principal_angles requires nonzero ranks");
  return detail::principal_angles_impl(a.basis(), b.basis());
}

inline Subspace intersect(const Subspace& a, const Subspace& b,
                          const TolerancePolicy& policy = {}) {
  policy.validate();
  detail::require_same_ambient(a, b, "intersect");
  if (a.rank() == 0 || b.rank() == 0) return Subspace::zero(a.ambient_dim(), policy);

  Matrix overlap = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Index> hits;
  for (Index i = 0; i < sv.size(); ++i) {
    const double c = std::clamp(sv(i), -1.0, 1.0);
    if (c <= 0.7) continue;  // angle far from 0
    Vector u = a.basis() * svd.matrixU().col(i);
    Vector w = b.basis() * svd.matrixV().col(i);
    const double theta = 2.0 * std::asin(std::min(1.0, 0.5 * (u - w).norm()));
    if (theta <= policy.angle_tol) hits.push_back(i);
  }
  if (hits.empty()) return Subspace::zero(a.ambient_dim(), policy);
  Matrix dirs(a.ambient_dim(), static_cast<Index>(hits.size()));
  for (size_t k = 0; k < hits.size(); ++k) {
    Vector u = a.basis() * svd.matrixU().col(hits[k]);
    Vector w = b.basis() * svd.matrixV().col(hits[k]);
    dirs.col(static_cast<Index>(k)) = 0.5 * (u + w);  // symmetric representative
  }
  return orthonormalize(dirs, policy);
}

inline Subspace orthogonal_complement(const Subspace& s) {
  const Index d = s.ambient_dim();
  const Index r = s.rank();
  TolerancePolicy policy;
  policy.rank_tol = s.tol();
  if (r == 0) return Subspace::full(d, policy);
  if (r == d) return Subspace::zero(d, policy);
  Eigen::JacobiSVD<Matrix> svd(s.basis(), Eigen::ComputeFullU);
  // basis columns are orthonormal, so all r singular values are 1 and the
  // trailing d-r left singular vectors span the complement exactly
  return Subspace(svd.matrixU().rightCols(d - r), policy);
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b,
                             const TolerancePolicy& policy = {}) {
  detail::require_same_ambient(a, b, "subspace_sum");
  Matrix stacked(a.ambient_dim(), a.rank() + b.rank());
  if (a.rank() > 0) stacked.leftCols(a.rank()) = a.basis();
  if (b.rank() > 0) stacked.rightCols(b.rank()) = b.basis();
  if (stacked.cols() == 0) return Subspace::zero(a.ambient_dim(), policy);
  return orthonormalize(stacked, policy);
}

inline bool subspace_equal(const Subspace& a, const Subspace& b,
                           const TolerancePolicy& policy = {}) {
  policy.validate();
  detail::require_same_ambient(a, b, "subspace_equal");
  if (a.rank() != b.rank()) return false;
  if (a.rank() == 0) return true;
  auto angles = detail::principal_angles_impl(a.basis(), b.basis());
  return angles.back() <= policy.angle_tol;
}

inline bool contains(const Subspace& s, const Vector& v, const TolerancePolicy& policy = {}) {
  policy.validate();
  const Vector residual = v - project(s, v);  // project checks dimensions
  return residual.norm() <= policy.rank_tol * v.norm();
}

}  // namespace opline
