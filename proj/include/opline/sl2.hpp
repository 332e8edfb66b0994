#pragma once

// SL(2,R) elements and the named one-parameter subgroups.

#include <cmath>
#include <cstdio>

#include <Eigen/Dense>

#include "opline/errors.hpp"

namespace opline {

inline constexpr double kUnimodularTol = 1e-12;

struct GroupElement {
  double a, b, c, d;

  GroupElement(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d)))
      fail(errc::nonfinite_entries, "group element entries must be finite");
    const double det = a * d - b * c;
    if (std::abs(det - 1.0) > kUnimodularTol) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "|det - 1| = %.3e exceeds %.1e", std::abs(det - 1.0),
                    kUnimodularTol);
      fail(errc::not_unimodular, buf);
    }
  }

  static GroupElement identity() { return GroupElement(1.0, 0.0, 0.0, 1.0); }

  GroupElement inverse() const { return GroupElement(d, -b, -c, a); }

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << a, b, c, d;
    return m;
  }

  /// Projective action on the real line, t -> (a t + b)/(c t + d).
  double mobius(double t) const { return (a * t + b) / (c * t + d); }

  friend GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    return GroupElement(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                        g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
  }
};

namespace subgroup {

/// Rotation: [[cos t, sin t], [-sin t, cos t]].
inline GroupElement k(double t) {
  return GroupElement(std::cos(t), std::sin(t), -std::sin(t), std::cos(t));
}

/// Upper shear: [[1, t], [0, 1]].
inline GroupElement n(double t) { return GroupElement(1.0, t, 0.0, 1.0); }

/// Lower shear: [[1, 0], [t, 1]].
inline GroupElement n_prime(double t) { return GroupElement(1.0, 0.0, t, 1.0); }

/// Dilation: [[e^t, 0], [0, e^-t]].
inline GroupElement a(double t) { return GroupElement(std::exp(t), 0.0, 0.0, std::exp(-t)); }

/// One-parameter subgroup fixing the projective point [lambda : 1]:
/// [[1 - lambda t, lambda^2 t], [-t, 1 + lambda t]]. Unit determinant for all t.
inline GroupElement n_lambda(double lambda, double t) {
  return GroupElement(1.0 - lambda * t, lambda * lambda * t, -t, 1.0 + lambda * t);
}

/// Semigroup fixing [lambda : 1] and [1 : 0] (t > 0):
/// [[e^t, lambda (e^-t - e^t)], [0, e^-t]] = n(lambda) a(t) n(-lambda).
inline GroupElement a_lambda(double lambda, double t) {
  if (!(t > 0.0))
    fail(errc::nonpositive_parameter, "a_lambda needs t > 0, got " + std::to_string(t));
  const double et = std::exp(t);
  const double emt = std::exp(-t);
  return GroupElement(et, lambda * (emt - et), 0.0, emt);
}

}  // namespace subgroup

namespace generator {

/// Nilpotent generator of n_lambda: n_lambda(lambda, t) = I + t X, X^2 = 0.
inline Eigen::Matrix2d n_lambda(double lambda) {
  Eigen::Matrix2d x;
  x << -lambda, lambda * lambda, -1.0, lambda;
  return x;
}

/// Generator of the upper-shear subgroup n(t) = I + t X.
inline Eigen::Matrix2d n_infinity() {
  Eigen::Matrix2d x;
  x << 0.0, 1.0, 0.0, 0.0;
  return x;
}

}  // namespace generator

}  // namespace opline
