#include <doctest.h>

#include <ymddr/errors.hpp>
#include <ymddr/polyquad.hpp>

#include "support.hpp"

#include <cmath>

using namespace ymddr;

namespace
{
  double factorial(int n)
  {
    return std::tgamma(n + 1.);
  }

  double power(double x, int p)
  {
    return p == 0 ? 1. : std::pow(x, p);
  }
} // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials on [0,1]")
{
  for (int n = 1; n <= 7; ++n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    REQUIRE(x.size() == std::size_t(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.;
      for (int i = 0; i < n; ++i) {
        s += w[i] * power(x[i], p);
      }
      CHECK(s == doctest::Approx(1. / (p + 1)).epsilon(1e-14));
    }
  }
  std::vector<double> x, w;
  CHECK_THROWS_AS(gauss_legendre(0, x, w), InvalidArgument);
}

TEST_CASE("segment rule")
{
  const Vector3 a(0.1, 0.2, 0.3), b(1.1, 0.2, 0.3);
  for (int deg = 0; deg <= max_quadrature_degree; ++deg) {
    const QuadratureRule qr = segment_rule(a, b, deg);
    const double s = qr.integrate([&](const Vector3 & x) { return power(x.x() - 0.1, deg); });
    CHECK(s == doctest::Approx(1. / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("triangle rule is exact up to the requested degree")
{
  const Vector3 o(0, 0, 0), e1(1, 0, 0), e2(0, 1, 0);
  for (int deg = 0; deg <= max_quadrature_degree; ++deg) {
    const QuadratureRule qr = triangle_rule(o, e1, e2, deg);
    for (int a = 0; a <= deg; ++a) {
      const int b = deg - a;
      const double s = qr.integrate([&](const Vector3 & x) { return power(x.x(), a) * power(x.y(), b); });
      CHECK(s == doctest::Approx(factorial(a) * factorial(b) / factorial(a + b + 2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tetrahedron rule is exact up to the requested degree")
{
  const Vector3 o(0, 0, 0), e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  for (int deg = 0; deg <= max_quadrature_degree; ++deg) {
    const QuadratureRule qr = tetrahedron_rule(o, e1, e2, e3, deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        const int c = deg - a - b;
        const double s =
          qr.integrate([&](const Vector3 & x) { return power(x.x(), a) * power(x.y(), b) * power(x.z(), c); });
        CHECK(s == doctest::Approx(factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3))
                     .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("entity rules on polyhedral meshes")
{
  const Mesh m = build_cubic_mesh(2);
  // cell 0 is [0, 1/2]^3
  const QuadratureRule cell = rule(m, {EntityKind::cell, 0}, 6);
  double w = 0.;
  for (double x : cell.weights) {
    w += x;
  }
  CHECK(w == doctest::Approx(0.125).epsilon(1e-14));
  const double s = cell.integrate([](const Vector3 & x) { return x.x() * x.x() * x.y() * x.y() * x.z() * x.z(); });
  CHECK(s == doctest::Approx(std::pow(std::pow(0.5, 3) / 3., 3)).epsilon(1e-13));

  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    const QuadratureRule qr = rule(m, {EntityKind::face, f}, 4);
    double area = 0.;
    for (double x : qr.weights) {
      area += x;
    }
    CHECK(area == doctest::Approx(m.face(f).area).epsilon(1e-14));
    const Vector3 c = qr.integrate([](const Vector3 & x) { return x; }) / area;
    CHECK((c - m.face(f).centroid).norm() < 1e-14);
  }
  const QuadratureRule vertex = rule(m, {EntityKind::vertex, 3}, 5);
  REQUIRE(vertex.size() == 1);
  CHECK(vertex.weights[0] == 1.);
  CHECK_THROWS_AS(rule(m, {EntityKind::cell, 0}, max_quadrature_degree + 1), InvalidArgument);
  CHECK_THROWS_AS(rule(m, {EntityKind::cell, 99}, 2), InvalidArgument);
}

TEST_CASE("prism cell rules")
{
  const Mesh m = testing::prism_mesh(1);
  // cell 0 is {0 <= y <= x <= 1, 0 <= z <= 1}
  const QuadratureRule qr = rule(m, {EntityKind::cell, 0}, 5);
  const double s = qr.integrate([](const Vector3 & x) { return x.x() * x.x() * x.y() * x.z(); });
  // int_0^1 x^2 (x^2 / 2) dx * 1/2
  CHECK(s == doctest::Approx(0.05).epsilon(1e-13));
}

TEST_CASE("monomial bases")
{
  const Mesh m = build_cubic_mesh(2);
  const MonomialBasis cell(m, {EntityKind::cell, 0}, 1);
  CHECK(cell.dimension() == 4);
  CHECK(cell.intrinsic_dimension() == 3);
  const Vector3 x(0.3, 0.1, 0.4);
  const Eigen::VectorXd v = cell.values(x);
  CHECK(v(0) == 1.);
  const Eigen::MatrixXd g = cell.gradients(x);
  CHECK(g.col(0).norm() == 0.);
  // linear monomials have constant gradients 1/h_T along the frame
  for (int i = 1; i < 4; ++i) {
    CHECK(g.col(i).norm() == doctest::Approx(1. / cell.scale()));
  }
  const MonomialBasis face(m, {EntityKind::face, 0}, 2);
  CHECK(face.dimension() == 6);
  CHECK(face.intrinsic_dimension() == 2);
  const auto & frame = face.frame();
  CHECK(std::abs(frame.col(0).dot(frame.col(1))) < 1e-14);
  CHECK((frame.col(0).cross(frame.col(1)) - m.face(0).normal).norm() < 1e-14);
  const MonomialBasis edge(m, {EntityKind::edge, 0}, 3);
  CHECK(edge.dimension() == 4);
  CHECK_THROWS_AS(MonomialBasis(m, {EntityKind::cell, 0}, -1), InvalidArgument);
}

TEST_CASE("L2 projections reproduce their target spaces")
{
  const Mesh m = testing::prism_mesh(2);
  const EntityId T{EntityKind::cell, 3};
  const ScalarField affine = [](const Vector3 & x) { return 1. + 2. * x.x() - x.y() + 0.5 * x.z(); };
  const Eigen::VectorXd c = l2_project(m, T, affine, {ProjectionSpace::polynomial, 1});
  const QuadratureRule qr = rule(m, T, 4);
  for (std::size_t i = 0; i < qr.size(); ++i) {
    const Eigen::MatrixXd B = target_basis(m, T, {ProjectionSpace::polynomial, 1}, qr.nodes[i], false);
    CHECK((B * c)(0) == doctest::Approx(affine(qr.nodes[i])).epsilon(1e-13));
  }
  // zero-mean linear projection of a constant is zero
  const Eigen::VectorXd z =
    l2_project(m, T, ScalarField([](const Vector3 &) { return 3.; }), {ProjectionSpace::zero_mean_linear, 1});
  CHECK(z.norm() < 1e-13);
  // (x - x_T) x c lies in G^{c,1}
  const Vector3 k(0.2, -0.4, 1.);
  const Vector3 xT = m.cell(3).centroid;
  const VectorField koszul = [&](const Vector3 & x) { return Vector3((x - xT).cross(k)); };
  const Eigen::VectorXd g = l2_project(m, T, koszul, {ProjectionSpace::koszul_gc1, 0});
  for (std::size_t i = 0; i < qr.size(); ++i) {
    const Eigen::MatrixXd B = target_basis(m, T, {ProjectionSpace::koszul_gc1, 0}, qr.nodes[i], true);
    CHECK((B * g - koszul(qr.nodes[i])).norm() < 1e-13);
  }
  CHECK_THROWS_AS(target_basis(m, T, {ProjectionSpace::koszul_rc2, 1}, xT, false), InvalidArgument);
  CHECK_THROWS_AS(target_basis(m, {EntityKind::face, 0}, {ProjectionSpace::koszul_gc1, 0}, xT, true),
                  InvalidArgument);
}

TEST_CASE("tangential projections on faces")
{
  const Mesh m = build_cubic_mesh(1);
  const EntityId F{EntityKind::face, 0};
  const Vector3 n = m.face(0).normal;
  const Vector3 c(1., 2., 3.);
  const Eigen::VectorXd p = l2_project(m, F, VectorField([&](const Vector3 &) { return c; }),
                                       {ProjectionSpace::polynomial, 0});
  const Eigen::MatrixXd B = target_basis(m, F, {ProjectionSpace::polynomial, 0}, m.face(0).centroid, true);
  const Vector3 tangential = B * p;
  CHECK((tangential - (c - c.dot(n) * n)).norm() < 1e-14);
}
