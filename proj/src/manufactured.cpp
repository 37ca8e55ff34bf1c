#include <ymddr/errors.hpp>
#include <ymddr/manufactured.hpp>
#include <ymddr/polyquad.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace ymddr
{

  namespace
  {
    constexpr double pi = std::numbers::pi;

    // Spatial profile shared by the e_1 and e_2 components
    Vector3 profile(const Vector3 & x)
    {
      const double sx = std::sin(pi * x(0)), cx = std::cos(pi * x(0));
      const double sy = std::sin(pi * x(1)), cy = std::cos(pi * x(1));
      const double sz = std::sin(pi * x(2)), cz = std::cos(pi * x(2));
      return Vector3(-0.5 * sx * cy * cz, cx * sy * cz, -0.5 * cx * cy * sz);
    }

    Vector3 curl_profile(const Vector3 & x)
    {
      const double sx = std::sin(pi * x(0)), cx = std::cos(pi * x(0));
      const double sy = std::sin(pi * x(1));
      const double sz = std::sin(pi * x(2)), cz = std::cos(pi * x(2));
      return Vector3(1.5 * pi * cx * sy * sz, 0., -1.5 * pi * sx * sy * cz);
    }

    // Richardson extrapolation of central differences, steps h and h/2
    template <typename F>
    auto richardson(const F & f, double h)
    {
      const auto d1 = ((f(h) - f(-h)) / (2. * h)).eval();
      const auto d2 = ((f(0.5 * h) - f(-0.5 * h)) / h).eval();
      return ((4. * d2 - d1) / 3.).eval();
    }

    constexpr double fd_step = 1e-4;
  } // namespace

  ManufacturedSolution::ManufacturedSolution(LieAlgebra algebra)
    : m_algebra(std::move(algebra))
  {
    if (m_algebra.dim() != 3) {
      throw InvalidArgument("the manufactured solution needs a three-dimensional Lie algebra");
    }
  }

  Matrix3X ManufacturedSolution::potential(double t, const Vector3 & x) const
  {
    const Vector3 a = profile(x);
    const double sy = std::sin(pi * x(1)), cz = std::cos(pi * x(2)), cx = std::cos(pi * x(0));
    Matrix3X A(3, 3);
    A.col(0) = std::cos(t) * a;
    A.col(1) = std::sin(t) * a;
    A.col(2) = Vector3(-0.5 * std::sin(t) * sy * sy, std::cos(t) * cz * cz, -0.5 * std::sin(t) * cx * cx);
    return A;
  }

  Matrix3X ManufacturedSolution::electric(double t, const Vector3 & x) const
  {
    const Vector3 a = profile(x);
    const double sy = std::sin(pi * x(1)), cz = std::cos(pi * x(2)), cx = std::cos(pi * x(0));
    Matrix3X E(3, 3);
    E.col(0) = std::sin(t) * a;
    E.col(1) = -std::cos(t) * a;
    E.col(2) = Vector3(0.5 * std::cos(t) * sy * sy, std::sin(t) * cz * cz, 0.5 * std::cos(t) * cx * cx);
    return E;
  }

  Matrix3X ManufacturedSolution::curl_potential(double t, const Vector3 & x) const
  {
    const Vector3 c = curl_profile(x);
    const double sx = std::sin(pi * x(0)), cx = std::cos(pi * x(0));
    const double sy = std::sin(pi * x(1)), cy = std::cos(pi * x(1));
    const double sz = std::sin(pi * x(2)), cz = std::cos(pi * x(2));
    Matrix3X C(3, 3);
    C.col(0) = std::cos(t) * c;
    C.col(1) = std::sin(t) * c;
    // A_3 = (f(y), g(z), h(x)) has curl (-g'(z), -h'(x), -f'(y))
    C.col(2) = Vector3(2. * pi * std::cos(t) * cz * sz, -pi * std::sin(t) * cx * sx, pi * std::sin(t) * sy * cy);
    return C;
  }

  Matrix3X ManufacturedSolution::cross_bracket(const Matrix3X & a, const Matrix3X & b) const
  {
    const int d = m_algebra.dim();
    Matrix3X r = Matrix3X::Zero(3, d);
    for (int I = 0; I < d; ++I) {
      for (int J = 0; J < d; ++J) {
        const Vector3 cross = Vector3(a.col(I)).cross(Vector3(b.col(J)));
        for (int K = 0; K < d; ++K) {
          const double c = m_algebra.structure(K, I, J);
          if (c != 0.) {
            r.col(K) += c * cross;
          }
        }
      }
    }
    return r;
  }

  Matrix3X ManufacturedSolution::magnetic(double t, const Vector3 & x) const
  {
    const Matrix3X A = potential(t, x);
    return curl_potential(t, x) + 0.5 * cross_bracket(A, A);
  }

  Matrix3X ManufacturedSolution::curl_of(const std::function<Matrix3X(const Vector3 &)> & f, const Vector3 & x) const
  {
    Matrix3X D[3];
    for (int k = 0; k < 3; ++k) {
      D[k] = richardson(
        [&](double s) -> Matrix3X {
          Vector3 y = x;
          y(k) += s;
          return f(y);
        },
        fd_step);
    }
    // D[k](i, I) = d_k f_i^I
    Matrix3X c(3, D[0].cols());
    c.row(0) = D[1].row(2) - D[2].row(1);
    c.row(1) = D[2].row(0) - D[0].row(2);
    c.row(2) = D[0].row(1) - D[1].row(0);
    return c;
  }

  Matrix3X ManufacturedSolution::forcing(double t, const Vector3 & x) const
  {
    // -d_tt A = A for this potential
    const Matrix3X dtE = potential(t, x);
    const Matrix3X A = potential(t, x);
    const Matrix3X curl_B =
      curl_of([&](const Vector3 & y) -> Matrix3X { return magnetic(t, y); }, x);
    return dtE - curl_B - cross_bracket(A, magnetic(t, x));
  }

  ManufacturedValues ManufacturedSolution::eval(double t, const Vector3 & x) const
  {
    return {potential(t, x), electric(t, x), magnetic(t, x), forcing(t, x)};
  }

  double ManufacturedSolution::self_test(int samples, unsigned seed) const
  {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0., 1.);
    double worst = 0.;
    for (int s = 0; s < samples; ++s) {
      const double t = unit(rng);
      const Vector3 x(unit(rng), unit(rng), unit(rng));
      const Matrix3X curl_fd = curl_of([&](const Vector3 & y) -> Matrix3X { return potential(t, y); }, x);
      worst = std::max(worst, (curl_fd - curl_potential(t, x)).cwiseAbs().maxCoeff());
      const Matrix3X dtA = richardson([&](double h) -> Matrix3X { return potential(t + h, x); }, fd_step);
      worst = std::max(worst, (electric(t, x) + dtA).cwiseAbs().maxCoeff());
      const Matrix3X dtE = richardson([&](double h) -> Matrix3X { return electric(t + h, x); }, fd_step);
      worst = std::max(worst, (dtE - potential(t, x)).cwiseAbs().maxCoeff());
    }
    return worst;
  }

  LieVectorField ManufacturedSolution::potential_field(double t) const
  {
    return [this, t](const Vector3 & x) { return potential(t, x); };
  }

  LieVectorField ManufacturedSolution::electric_field(double t) const
  {
    return [this, t](const Vector3 & x) { return electric(t, x); };
  }

  LieVectorField ManufacturedSolution::magnetic_field(double t) const
  {
    return [this, t](const Vector3 & x) { return magnetic(t, x); };
  }

  LieVectorField ManufacturedSolution::forcing_field(double t) const
  {
    return [this, t](const Vector3 & x) { return forcing(t, x); };
  }

  //------------------------------------------------------------------------------

  Eigen::VectorXd boundary_functional(const LADDRComplex & complex, const LieVectorField & B, int degree)
  {
    const Mesh & mesh = complex.mesh();
    const int d = complex.lie_dim();
    const Eigen::MatrixXd & g = complex.algebra().metric();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(complex.dimension(Space::curl));
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      if (!mesh.is_boundary(iF)) {
        continue;
      }
      const MeshFace & F = mesh.face(iF);
      const Vector3 n_out = double(orientation(mesh, {EntityKind::cell, F.cells[0]}, {EntityKind::face, iF})) * F.normal;
      const QuadratureRule qr = rule(mesh, {EntityKind::face, iF}, degree);
      const Eigen::MatrixXd integral = qr.integrate([&](const Vector3 & x) -> Eigen::MatrixXd {
        const Matrix3X b = B(x);
        Eigen::MatrixXd r(3, b.cols());
        for (Eigen::Index I = 0; I < b.cols(); ++I) {
          r.col(I) = n_out.cross(Vector3(b.col(I)));
        }
        return r;
      });
      if (integral.cols() != d) {
        throw InvalidArgument("boundary_functional: field has the wrong Lie dimension");
      }
      const Matrix3X & gamma = complex.ddr().face_operators(iF).tangential_trace;
      for (std::size_t j = 0; j < F.edges.size(); ++j) {
        const Eigen::VectorXd pairing = integral.transpose() * gamma.col(j);
        out.segment(F.edges[j] * d, d) += g * pairing;
      }
    }
    return out;
  }

  ForcingProvider manufactured_forcing(const LADDRComplex & complex, const ManufacturedSolution & solution,
                                       bool with_boundary)
  {
    const LADDRComplex * c = &complex;
    const ManufacturedSolution * s = &solution;
    ForcingProvider f;
    f.source = [c, s](double t) { return la_interpolate_curl(c->mesh(), c->lie_dim(), s->forcing_field(t)); };
    if (with_boundary) {
      f.boundary = [c, s](double t) { return boundary_functional(*c, s->magnetic_field(t)); };
    }
    f.electric = [c, s](double t) { return la_interpolate_curl(c->mesh(), c->lie_dim(), s->electric_field(t)); };
    return f;
  }

} // namespace ymddr
