#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "opline/mobius.hpp"
#include "opline/sl2.hpp"
#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"
#include "helpers.hpp"

using namespace opline;
using test::gaussian;
using test::gaussian_vector;
using test::random_group_element;
using test::random_orthogonal;
using test::random_symmetric;

namespace {

Subspace graph_subspace(const Polarization& p, const Matrix& t) {
  const Index n = p.half_dim();
  Matrix cols(2 * n, n);
  cols.topRows(n) = p.u() * t;
  cols.bottomRows(n) = Matrix::Identity(n, n);
  return orthonormalize(cols, p.tolerance());
}

}  // namespace

TEST_CASE("group elements enforce unit determinant") {
  REQUIRE_NOTHROW(GroupElement(1, 1, 0, 1));
  REQUIRE_THROWS_AS(GroupElement(2, 0, 0, 1), domain_error);
  REQUIRE_THROWS_AS(GroupElement(1, 0, std::numeric_limits<double>::infinity(), 1), domain_error);

  const GroupElement g(2, 3, 1, 2);
  const GroupElement gi = g.inverse();
  const GroupElement id = g * gi;
  REQUIRE(std::abs(id.a - 1) < 1e-15);
  REQUIRE(std::abs(id.b) < 1e-15);
  REQUIRE(std::abs(id.c) < 1e-15);
  REQUIRE(std::abs(id.d - 1) < 1e-15);

  REQUIRE(GroupElement(1, 2, 0, 1).mobius(3.0) == 5.0);
}

TEST_CASE("subgroup elements have the expected coefficients") {
  const double t = 0.7;
  const GroupElement k = subgroup::k(t);
  REQUIRE(k.a == std::cos(t));
  REQUIRE(k.b == std::sin(t));
  REQUIRE(k.c == -std::sin(t));
  REQUIRE(k.d == std::cos(t));

  REQUIRE(subgroup::n(t).b == t);
  REQUIRE(subgroup::n_prime(t).c == t);
  REQUIRE(subgroup::a(t).a == std::exp(t));
  REQUIRE(subgroup::a(t).d == std::exp(-t));

  // n_lambda(0, t) degenerates to the lower-triangular subgroup
  const GroupElement nl0 = subgroup::n_lambda(0.0, 2.5);
  const GroupElement np = subgroup::n_prime(-2.5);
  REQUIRE(nl0.a == np.a);
  REQUIRE(nl0.b == np.b);
  REQUIRE(nl0.c == np.c);
  REQUIRE(nl0.d == np.d);

  // one-parameter law in t
  std::mt19937 rng(221);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = dist(rng), s = dist(rng), u = dist(rng);
    const GroupElement lhs = subgroup::n_lambda(lambda, s) * subgroup::n_lambda(lambda, u);
    const GroupElement rhs = subgroup::n_lambda(lambda, s + u);
    REQUIRE(std::abs(lhs.a - rhs.a) < 1e-12);
    REQUIRE(std::abs(lhs.b - rhs.b) < 1e-12);
    REQUIRE(std::abs(lhs.c - rhs.c) < 1e-12);
    REQUIRE(std::abs(lhs.d - rhs.d) < 1e-12);
  }

  // dilation conjugated to fix lambda: a_lambda = n(lambda) a(t) n(-lambda)
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = dist(rng);
    const double t2 = std::abs(dist(rng)) + 0.01;
    const GroupElement lhs = subgroup::a_lambda(lambda, t2);
    const GroupElement rhs = subgroup::n(lambda) * subgroup::a(t2) * subgroup::n(-lambda);
    REQUIRE(std::abs(lhs.a - rhs.a) < 1e-12);
    REQUIRE(std::abs(lhs.b - rhs.b) < 1e-12);
    REQUIRE(std::abs(lhs.c - rhs.c) < 1e-12);
    REQUIRE(std::abs(lhs.d - rhs.d) < 1e-12);
  }

  REQUIRE_THROWS_AS(subgroup::a_lambda(1.0, 0.0), domain_error);
  REQUIRE_THROWS_AS(subgroup::a_lambda(1.0, -0.5), domain_error);
}

TEST_CASE("parabolic generators are nilpotent and exponentiate linearly") {
  std::mt19937 rng(222);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double lambda = dist(rng), t = dist(rng);
    const Eigen::Matrix2d x = generator::n_lambda(lambda);
    REQUIRE((x * x).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::Matrix2d expected = Eigen::Matrix2d::Identity() + t * x;
    const GroupElement g = subgroup::n_lambda(lambda, t);
    REQUIRE((g.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  const Eigen::Matrix2d xinf = generator::n_infinity();
  REQUIRE((xinf * xinf).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(xinf(0, 1) == 1.0);
}

TEST_CASE("representation matrix has the block form and is a homomorphism") {
  std::mt19937 rng(223);
  const Index n = 2;
  const Polarization pid = build_polarization(Matrix::Identity(n, n));
  const GroupElement g(1.5, 0.5, 1.0, 1.0);
  const Matrix rep = mu_matrix(pid, g);
  REQUIRE(max_abs(Matrix(rep.topLeftCorner(n, n) - 1.5 * Matrix::Identity(n, n))) == 0.0);
  REQUIRE(max_abs(Matrix(rep.topRightCorner(n, n) - 0.5 * Matrix::Identity(n, n))) == 0.0);
  REQUIRE(max_abs(Matrix(rep.bottomLeftCorner(n, n) - Matrix::Identity(n, n))) == 0.0);
  REQUIRE(max_abs(Matrix(rep.bottomRightCorner(n, n) - Matrix::Identity(n, n))) == 0.0);

  for (Index dim : {1, 3, 6}) {
    const Polarization p = build_polarization(random_orthogonal(dim, rng));
    REQUIRE(max_abs(Matrix(mu_matrix(p, GroupElement::identity()) -
                           Matrix::Identity(2 * dim, 2 * dim))) == 0.0);
    for (int trial = 0; trial < 20; ++trial) {
      const GroupElement g1 = random_group_element(rng);
      const GroupElement g2 = random_group_element(rng);
      const Matrix lhs = mu_matrix(p, g1) * mu_matrix(p, g2);
      const Matrix rhs = mu_matrix(p, g1 * g2);
      REQUIRE(max_abs(Matrix(lhs - rhs)) < 1e-12);
    }
  }
}

TEST_CASE("representation lands in the symplectic group") {
  std::mt19937 rng(224);
  const Index n = 4;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  const Matrix om = p.omega_matrix();
  for (int trial = 0; trial < 25; ++trial) {
    const GroupElement g = random_group_element(rng);
    const Matrix rep = mu_matrix(p, g);
    REQUIRE(max_abs(Matrix(rep.transpose() * om * rep - om)) < 1e-12);
  }
}

TEST_CASE("vector action matches the representation matrix and preserves the form") {
  std::mt19937 rng(225);
  const Index n = 5;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  for (int trial = 0; trial < 50; ++trial) {
    const GroupElement g = random_group_element(rng);
    const Vector z1 = gaussian_vector(2 * n, rng);
    const Vector z2 = gaussian_vector(2 * n, rng);
    REQUIRE((act_vector(p, g, z1) - mu_matrix(p, g) * z1).norm() < 1e-12);
    const double before = omega(p, z1, z2);
    const double after = omega(p, act_vector(p, g, z1), act_vector(p, g, z2));
    REQUIRE(std::abs(after - before) <= 1e-10 * (1.0 + std::abs(before)));
  }
}

TEST_CASE("subspace action is functorial and preserves Lagrangian points") {
  std::mt19937 rng(226);
  const Index n = 3;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  const Subspace g0 = graph_subspace(p, random_symmetric(n, rng));

  REQUIRE(subspace_equal(act_subspace(p, GroupElement::identity(), g0), g0));

  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g1 = random_group_element(rng);
    const GroupElement g2 = random_group_element(rng);
    const Subspace lhs = act_subspace(p, g1, act_subspace(p, g2, g0));
    const Subspace rhs = act_subspace(p, g1 * g2, g0);
    REQUIRE(subspace_equal(lhs, rhs));
    REQUIRE(is_lagrangian(p, lhs));
  }

  // rank and ambient dimension are preserved even off the Lagrangian locus
  const Subspace line = orthonormalize(gaussian(2 * n, 1, rng));
  const Subspace moved = act_subspace(p, subgroup::k(0.4), line);
  REQUIRE(moved.rank() == 1);
  REQUIRE(moved.ambient_dim() == 2 * n);
}

TEST_CASE("transformed graphs are graphs of the fractional operator") {
  std::mt19937 rng(227);
  const Index n = 4;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  int accepted = 0;
  while (accepted < 20) {
    const Matrix t = random_symmetric(n, rng);
    const GroupElement g = random_group_element(rng);
    const Matrix den = g.c * t + g.d * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(den);
    if (svd.singularValues()(n - 1) < 1e-3) continue;
    ++accepted;
    const Matrix mapped = linear_fractional_operator(g, t);
    const Subspace expect = graph_subspace(p, mapped);
    const Subspace got = act_subspace(p, g, graph_subspace(p, t));
    REQUIRE(subspace_equal(got, expect));
  }
}

TEST_CASE("linear fractional operator values and both product orders") {
  const GroupElement shift(1, 1, 0, 1);
  Matrix t1(1, 1);
  t1 << 2;
  REQUIRE(linear_fractional_operator(shift, t1)(0, 0) == 3.0);

  std::mt19937 rng(228);
  const Index n = 5;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix t = random_symmetric(n, rng);
    const GroupElement g = random_group_element(rng);
    const Matrix den = g.c * t + g.d * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(den);
    if (svd.singularValues()(n - 1) < 1e-3) continue;
    const Matrix got = linear_fractional_operator(g, t);
    const Matrix num = g.a * t + g.b * Matrix::Identity(n, n);
    // T commutes with cT + dI, so the two quotient orders agree
    const Matrix left = den.partialPivLu().solve(num);
    const Matrix right = den.transpose().partialPivLu().solve(num.transpose()).transpose();
    REQUIRE(max_abs(Matrix(got - left)) < 1e-10);
    REQUIRE(max_abs(Matrix(got - right)) < 1e-10);
    REQUIRE(max_abs(Matrix(got - got.transpose())) < 1e-10);
  }

  // singular denominator: inversion applied to a singular operator
  Matrix t0 = Matrix::Zero(2, 2);
  t0(0, 0) = 1.0;
  REQUIRE_THROWS_AS(linear_fractional_operator(GroupElement(0, 1, -1, 0), t0), domain_error);
  // non-symmetric input
  Matrix ns(2, 2);
  ns << 0, 1, 0, 0;
  REQUIRE_THROWS_AS(linear_fractional_operator(shift, ns), domain_error);
}

TEST_CASE("orbit classification separates planar from generic seeds") {
  std::mt19937 rng(229);
  const Index n = 3;
  const Polarization p = build_polarization(random_orthogonal(n, rng));

  // y proportional to U x: orbit stays in a 2-plane
  const Vector x = gaussian_vector(n, rng);
  Vector z(2 * n);
  z.head(n) = 2.0 * (p.u() * x);
  z.tail(n) = x;
  const OrbitClassification planar = orbit_classify(p, z);
  REQUIRE(planar.kind == OrbitKind::planar);
  REQUIRE(planar.plane.rank() == 2);
  REQUIRE(contains(planar.plane, z));
  for (int trial = 0; trial < 30; ++trial) {
    const Vector moved = act_vector(p, random_group_element(rng), z);
    REQUIRE(contains(planar.plane, moved));
  }

  // pure x and pure y seeds are planar as well
  Vector zx = Vector::Zero(2 * n);
  zx.tail(n) = x;
  REQUIRE(orbit_classify(p, zx).kind == OrbitKind::planar);
  Vector zy = Vector::Zero(2 * n);
  zy.head(n) = gaussian_vector(n, rng);
  const OrbitClassification oy = orbit_classify(p, zy);
  REQUIRE(oy.kind == OrbitKind::planar);
  REQUIRE(contains(oy.plane, zy));

  // independent parts: four independent orbit directions
  Vector zg(2 * n);
  zg.head(n) = gaussian_vector(n, rng);
  zg.tail(n) = gaussian_vector(n, rng);
  const OrbitClassification generic = orbit_classify(p, zg);
  REQUIRE(generic.kind == OrbitKind::generic);
  REQUIRE(generic.directions.size() == 4);
  Matrix dirs(2 * n, 4);
  for (int i = 0; i < 4; ++i) dirs.col(i) = generic.directions[i];
  Eigen::JacobiSVD<Matrix> svd(dirs);
  REQUIRE(svd.singularValues()(3) > 1e-6);

  REQUIRE_THROWS_AS(orbit_classify(p, Vector(Vector::Zero(2 * n))), domain_error);

  // scalar case: parts are always collinear
  const Polarization p1 = build_polarization(Matrix::Identity(1, 1));
  Vector w(2);
  w << 0.7, -0.4;
  REQUIRE(orbit_classify(p1, w).kind == OrbitKind::planar);
}
