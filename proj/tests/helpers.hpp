#pragma once

// Shared randomness and construction helpers for the test suites. Every
// test fixes its own seed so failures reproduce exactly.

#include <random>

#include <Eigen/Dense>

#include "opline/linalg.hpp"
#include "opline/sl2.hpp"

namespace test {

using opline::Index;
using opline::Matrix;
using opline::Vector;

inline Matrix gaussian(Index rows, Index cols, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

inline Vector gaussian_vector(Index n, std::mt19937& rng) {
  return gaussian(n, 1, rng).col(0);
}

inline Matrix random_orthogonal(Index n, std::mt19937& rng) {
  const Matrix a = gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // fix the gauge so the distribution does not depend on QR sign choices
  const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

inline Matrix random_symmetric(Index n, std::mt19937& rng) {
  const Matrix a = gaussian(n, n, rng);
  return 0.5 * (a + a.transpose());
}

/// Symmetric matrix with prescribed eigenvalues (random orthogonal frame).
inline Matrix symmetric_with_spectrum(const Vector& eigenvalues, std::mt19937& rng) {
  const Index n = eigenvalues.size();
  const Matrix q = random_orthogonal(n, rng);
  return q * eigenvalues.asDiagonal() * q.transpose();
}

/// Unit-determinant 2x2 coefficients, bounded away from degenerate scales.
inline opline::GroupElement random_group_element(std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  while (true) {
    const double a = dist(rng), b = dist(rng), c = dist(rng);
    double d;
    if (std::abs(a) > 0.2) {
      d = (1.0 + b * c) / a;
    } else {
      continue;
    }
    if (std::abs(d) > 4.0) continue;
    return opline::GroupElement(a, b, c, d);
  }
}

}  // namespace test
