#include <doctest.h>

#include <ymddr/errors.hpp>
#include <ymddr/manufactured.hpp>

#include <random>

using namespace ymddr;

namespace
{
  // Plain central differences with step h, independent of the Richardson machinery
  Matrix3X fd_curl(const std::function<Matrix3X(const Vector3 &)> & f, const Vector3 & x, double h)
  {
    Matrix3X D[3];
    for (int k = 0; k < 3; ++k) {
      Vector3 p = x, m = x;
      p(k) += h;
      m(k) -= h;
      D[k] = (f(p) - f(m)) / (2. * h);
    }
    Matrix3X c(3, D[0].cols());
    c.row(0) = D[1].row(2) - D[2].row(1);
    c.row(1) = D[2].row(0) - D[0].row(2);
    c.row(2) = D[0].row(1) - D[1].row(0);
    return c;
  }
} // namespace

TEST_CASE("manufactured point values")
{
  const ManufacturedSolution ms(su2());
  Matrix3X expected = Matrix3X::Zero(3, 3);
  expected(1, 2) = 1.;
  CHECK((ms.potential(0., Vector3::Zero()) - expected).norm() <= 1e-15);
  CHECK(ms.potential(0., Vector3::Constant(0.5)).norm() <= 1e-15);
  Matrix3X e0 = Matrix3X::Zero(3, 3);
  e0(2, 2) = 0.5;
  CHECK((ms.electric(0., Vector3::Zero()) - e0).norm() <= 1e-15);
  const ManufacturedValues v = ms.eval(0.4, Vector3(0.1, 0.7, 0.3));
  CHECK((v.A - ms.potential(0.4, Vector3(0.1, 0.7, 0.3))).norm() == 0.);
  CHECK(v.F.cols() == 3);
}

TEST_CASE("manufactured derivatives")
{
  const ManufacturedSolution ms(su2());
  CHECK(ms.self_test() <= 1e-9);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0., 1.);
  for (int s = 0; s < 10; ++s) {
    const double t = u(rng);
    const Vector3 x(u(rng), u(rng), u(rng));
    const double h = 1e-5;
    const Matrix3X dtA = (ms.potential(t + h, x) - ms.potential(t - h, x)) / (2. * h);
    CHECK((ms.electric(t, x) + dtA).cwiseAbs().maxCoeff() <= 1e-8);
    const Matrix3X curl = fd_curl([&](const Vector3 & y) { return ms.potential(t, y); }, x, h);
    CHECK((ms.curl_potential(t, x) - curl).cwiseAbs().maxCoeff() <= 1e-7);
    // F = d_t E - curl B - [A, B]
    const Matrix3X dtE = (ms.electric(t + h, x) - ms.electric(t - h, x)) / (2. * h);
    const Matrix3X curlB = fd_curl([&](const Vector3 & y) { return ms.magnetic(t, y); }, x, 1e-4);
    const Matrix3X F = dtE - curlB - ms.cross_bracket(ms.potential(t, x), ms.magnetic(t, x));
    CHECK((ms.forcing(t, x) - F).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("cross bracket of Lie-valued vectors")
{
  const ManufacturedSolution ms(su2());
  Matrix3X a = Matrix3X::Zero(3, 3), b = Matrix3X::Zero(3, 3);
  a(0, 0) = 1.; // x (x) e_1
  b(1, 1) = 1.; // y (x) e_2
  const Matrix3X c = ms.cross_bracket(a, b);
  // (x cross y) (x) [e_1, e_2] = z (x) e_3
  Matrix3X expected = Matrix3X::Zero(3, 3);
  expected(2, 2) = 1.;
  CHECK((c - expected).norm() <= 1e-15);
  CHECK((ms.cross_bracket(b, a) - c).norm() <= 1e-15);
  CHECK_THROWS_AS(ManufacturedSolution{u1()}, InvalidArgument);
}

TEST_CASE("boundary functional")
{
  const Mesh m = build_cubic_mesh(2);
  const DDRComplex ddr(m);
  const LADDRComplex la(ddr, su2());
  // B = (-y/2, x/2, 0) (x) e_1 has curl z (x) e_1; for constant k (x) e_1,
  // int_{dU} (n x B) . k = int_U k . curl B = k_z
  const LieVectorField B = [](const Vector3 & x) {
    Matrix3X b = Matrix3X::Zero(3, 3);
    b.col(0) = Vector3(-0.5 * x.y(), 0.5 * x.x(), 0.);
    return b;
  };
  const Vector3 k(0.3, -0.8, 1.7);
  const Eigen::VectorXd v = la_interpolate_curl(m, 3, [&](const Vector3 &) {
    Matrix3X c = Matrix3X::Zero(3, 3);
    c.col(0) = k;
    return c;
  });
  const Eigen::VectorXd g = boundary_functional(la, B);
  CHECK(g.dot(v) == doctest::Approx(k.z()).epsilon(1e-12));
  // only boundary edges are touched
  for (std::size_t e = 0; e < m.n_edges(); ++e) {
    const Vector3 p = m.edge(e).midpoint;
    const bool interior = (p.array() > 1e-12).all() && (p.array() < 1. - 1e-12).all();
    if (interior) {
      CHECK(g.segment(3 * e, 3).norm() == 0.);
    }
  }
}

TEST_CASE("manufactured forcing provider")
{
  const Mesh m = build_cubic_mesh(1);
  const DDRComplex ddr(m);
  const LADDRComplex la(ddr, su2());
  const ManufacturedSolution ms(su2());
  const ForcingProvider with = manufactured_forcing(la, ms, true);
  const ForcingProvider without = manufactured_forcing(la, ms, false);
  CHECK(bool(with.boundary));
  CHECK_FALSE(bool(without.boundary));
  CHECK_FALSE(with.empty());
  CHECK(ForcingProvider{}.empty());
  CHECK(with.source(0.3).size() == Eigen::Index(la.dimension(Space::curl)));
  CHECK((with.electric(0.2) - la_interpolate_curl(m, 3, ms.electric_field(0.2))).norm() == 0.);
}
