#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "opline/subspace.hpp"
#include "opline/symplectic.hpp"
#include "helpers.hpp"

using namespace opline;
using test::gaussian;
using test::gaussian_vector;
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

TEST_CASE("build_polarization validates U") {
  std::mt19937 rng(111);
  const Matrix u = random_orthogonal(5, rng);
  REQUIRE_NOTHROW(build_polarization(u));

  Matrix skewed = u;
  skewed(0, 0) += 1e-6;
  REQUIRE_THROWS_AS(build_polarization(skewed), domain_error);
  REQUIRE_THROWS_AS(build_polarization(gaussian(3, 4, rng)), domain_error);
}

TEST_CASE("structure matrix squares to minus identity") {
  std::mt19937 rng(112);
  const Index n = 4;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  const Matrix w = p.w();
  REQUIRE(max_abs(Matrix(w * w + Matrix::Identity(2 * n, 2 * n))) < 1e-14);
  REQUIRE(max_abs(Matrix(p.omega_matrix() - w.transpose())) == 0.0);
  // block layout: top-right U, bottom-left -U^T
  REQUIRE(max_abs(Matrix(w.topRightCorner(n, n) - p.u())) == 0.0);
  REQUIRE(max_abs(Matrix(w.bottomLeftCorner(n, n) + p.u().transpose())) == 0.0);
  REQUIRE(max_abs(Matrix(w.topLeftCorner(n, n))) == 0.0);
  REQUIRE(max_abs(Matrix(w.bottomRightCorner(n, n))) == 0.0);
}

TEST_CASE("form values, antisymmetry, and the matrix formula agree") {
  const Polarization p1 = build_polarization(Matrix::Identity(1, 1));
  Vector za(2), zb(2);
  za << 0, 1;  // x-direction
  zb << 1, 0;  // y-direction
  REQUIRE(omega(p1, za, zb) == 1.0);
  REQUIRE(omega(p1, zb, za) == -1.0);

  std::mt19937 rng(113);
  const Index n = 6;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  for (int trial = 0; trial < 50; ++trial) {
    const Vector z1 = gaussian_vector(2 * n, rng);
    const Vector z2 = gaussian_vector(2 * n, rng);
    const double v = omega(p, z1, z2);
    REQUIRE(std::abs(v + omega(p, z2, z1)) < 1e-12);
    REQUIRE(std::abs(v - z1.dot(p.omega_matrix() * z2)) < 1e-12);
  }
}

TEST_CASE("part extraction and assembly round trip") {
  std::mt19937 rng(114);
  const Polarization p = build_polarization(random_orthogonal(3, rng));
  const Vector z = gaussian_vector(6, rng);
  REQUIRE((p.assemble(p.y_part(z), p.x_part(z)) - z).norm() == 0.0);
  REQUIRE_THROWS_AS(p.y_part(Vector::Ones(5)), domain_error);
}

TEST_CASE("reference subspaces are Lagrangian and split the space") {
  std::mt19937 rng(115);
  const Index n = 4;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  REQUIRE(is_lagrangian(p, p.m()));
  REQUIRE(is_lagrangian(p, p.m_perp()));
  REQUIRE(max_abs(Matrix(p.m().basis().transpose() * p.m_perp().basis())) == 0.0);
  REQUIRE(subspace_sum(p.m(), p.m_perp()).rank() == 2 * n);
}

TEST_CASE("isotropy detection on frozen subspaces") {
  const Polarization p = build_polarization(Matrix::Identity(2, 2));
  // span{e1, e3} pairs a y-direction with its matching x-direction
  Matrix mixed = Matrix::Zero(4, 2);
  mixed(0, 0) = 1;
  mixed(2, 1) = 1;
  REQUIRE_FALSE(is_isotropic(p, Subspace(mixed)));
  REQUIRE_FALSE(is_lagrangian(p, Subspace(mixed)));

  // a line is always isotropic
  Matrix line = Matrix::Zero(4, 1);
  line(0, 0) = 1;
  REQUIRE(is_isotropic(p, Subspace(line)));
  REQUIRE_FALSE(is_lagrangian(p, Subspace(line)));
  REQUIRE(is_isotropic(p, Subspace::zero(4)));
}

TEST_CASE("operator graphs are Lagrangian") {
  std::mt19937 rng(116);
  for (Index n : {1, 3, 7}) {
    const Polarization p = build_polarization(random_orthogonal(n, rng));
    const Subspace g = graph_subspace(p, random_symmetric(n, rng));
    REQUIRE(is_lagrangian(p, g));
    // non-symmetric graphs are not
    if (n > 1) {
      Matrix t = gaussian(n, n, rng);
      t(0, 1) += 1.0;
      t(1, 0) -= 1.0;
      REQUIRE_FALSE(is_lagrangian(p, graph_subspace(p, t)));
    }
  }
}

TEST_CASE("symplectic complement fixes Lagrangian subspaces") {
  std::mt19937 rng(117);
  const Index n = 5;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  const Subspace g = graph_subspace(p, random_symmetric(n, rng));
  REQUIRE(subspace_equal(symplectic_complement(p, g), g));
  REQUIRE(subspace_equal(symplectic_complement(p, p.m()), p.m()));

  // a line's complement has codimension one and contains the line
  Matrix line = Matrix::Zero(2 * n, 1);
  line(0, 0) = 1;
  const Subspace comp = symplectic_complement(p, Subspace(line));
  REQUIRE(comp.rank() == 2 * n - 1);
  REQUIRE(contains(comp, Vector(line.col(0))));
  REQUIRE(max_abs(Matrix(line.transpose() * p.omega_matrix() * comp.basis())) < 1e-12);

  REQUIRE(symplectic_complement(p, Subspace::zero(2 * n)).rank() == 2 * n);
}

TEST_CASE("u_from_omega recovers the unitary behind a form") {
  std::mt19937 rng(118);
  for (Index n : {1, 2, 5}) {
    const Matrix u = random_orthogonal(n, rng);
    const Polarization p = build_polarization(u);
    const UFromOmegaResult rec = u_from_omega(p.omega_matrix(), p.m());
    // the embedded map is gauge-independent and must match U exactly
    REQUIRE(max_abs(Matrix(rec.u_embedded().topRightCorner(n, n) - u)) < 1e-12);
    // in the adapted frame the input form becomes the canonical form of the
    // recovered polarization
    const Matrix adapted_form =
        rec.adapted_basis.transpose() * p.omega_matrix() * rec.adapted_basis;
    REQUIRE(max_abs(Matrix(adapted_form - rec.polarization.omega_matrix())) < 1e-12);
  }
}

TEST_CASE("u_from_omega accepts a non-canonical Lagrangian reference") {
  std::mt19937 rng(119);
  const Index n = 3;
  const Polarization p = build_polarization(random_orthogonal(n, rng));
  const Subspace g = graph_subspace(p, random_symmetric(n, rng));
  const UFromOmegaResult rec = u_from_omega(p.omega_matrix(), g);
  const Matrix adapted_form =
      rec.adapted_basis.transpose() * p.omega_matrix() * rec.adapted_basis;
  REQUIRE(max_abs(Matrix(adapted_form - rec.polarization.omega_matrix())) < 1e-12);
}

TEST_CASE("u_from_omega rejects bad forms and bad reference subspaces") {
  const Index n = 2;
  const Polarization p = build_polarization(Matrix::Identity(n, n));
  const Matrix om = p.omega_matrix();

  Matrix not_skew = om;
  not_skew(0, 0) = 0.5;
  REQUIRE_THROWS_AS(u_from_omega(not_skew, p.m()), domain_error);

  Matrix degenerate = Matrix::Zero(2 * n, 2 * n);
  degenerate(0, 3) = 1;
  degenerate(3, 0) = -1;
  REQUIRE_THROWS_AS(u_from_omega(degenerate, p.m()), domain_error);

  // span{e1, e3} is not Lagrangian for the standard form
  Matrix mixed = Matrix::Zero(4, 2);
  mixed(0, 0) = 1;
  mixed(2, 1) = 1;
  REQUIRE_THROWS_AS(u_from_omega(om, Subspace(mixed)), domain_error);

  REQUIRE_THROWS_AS(u_from_omega(Matrix::Zero(3, 3), Subspace(Matrix::Identity(3, 1))),
                    domain_error);

  // nondegenerate skew form with Lagrangian M whose orthogonal complement
  // fails isotropy: no adapted polarization exists
  Matrix foreign = om;
  foreign(0, 1) = 0.3;
  foreign(1, 0) = -0.3;
  REQUIRE_THROWS_AS(u_from_omega(foreign, p.m()), domain_error);
}
