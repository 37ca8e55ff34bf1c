// Smooth exact solution of the Yang-Mills system on [0,1]^3 with su(2) values, and the
// data it induces on the discrete scheme.

#ifndef YMDDR_MANUFACTURED_HPP
#define YMDDR_MANUFACTURED_HPP

#include <ymddr/scheme.hpp>

namespace ymddr
{

  struct ManufacturedValues
  {
    Matrix3X A;
    Matrix3X E;
    Matrix3X B;
    Matrix3X F;
  };

  class ManufacturedSolution
  {
  public:
    /// The algebra must have dimension 3 (the field is expanded on e_1, e_2, e_3)
    explicit ManufacturedSolution(LieAlgebra algebra);

    const LieAlgebra & algebra() const { return m_algebra; }

    Matrix3X potential(double t, const Vector3 & x) const;
    /// -d_t A
    Matrix3X electric(double t, const Vector3 & x) const;
    /// curl A, closed form
    Matrix3X curl_potential(double t, const Vector3 & x) const;
    /// curl A + 1/2 [A, A]
    Matrix3X magnetic(double t, const Vector3 & x) const;
    /// d_t E - curl B - [A, B]
    Matrix3X forcing(double t, const Vector3 & x) const;

    ManufacturedValues eval(double t, const Vector3 & x) const;

    /// [a, b] for Lie-valued vectors: column K is sum_IJ c^K_IJ a_I x b_J
    Matrix3X cross_bracket(const Matrix3X & a, const Matrix3X & b) const;

    /// Largest discrepancy between the closed-form derivatives and finite differences at
    /// `samples` pseudo-random points (curl A and E = -d_t A)
    double self_test(int samples = 20, unsigned seed = 3) const;

    LieVectorField potential_field(double t) const;
    LieVectorField electric_field(double t) const;
    LieVectorField magnetic_field(double t) const;
    LieVectorField forcing_field(double t) const;

  private:
    Matrix3X curl_of(const std::function<Matrix3X(const Vector3 &)> & f, const Vector3 & x) const;

    LieAlgebra m_algebra;
  };

  /// sum over boundary faces of int_F < n_out x B, gamma_t,F v > for every curl basis vector v
  Eigen::VectorXd boundary_functional(const LADDRComplex & complex, const LieVectorField & B, int degree = 8);

  /// Source, boundary functional and exact electric field for the scheme
  ForcingProvider manufactured_forcing(const LADDRComplex & complex, const ManufacturedSolution & solution,
                                       bool with_boundary = true);

} // namespace ymddr

#endif
