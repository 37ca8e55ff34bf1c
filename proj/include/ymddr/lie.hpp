// Finite-dimensional real Lie algebras given by structure constants and an Ad-invariant metric.

#ifndef YMDDR_LIE_HPP
#define YMDDR_LIE_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ymddr
{

  /// Coefficients of an algebra element in the basis (e_I)
  using LieVector = Eigen::VectorXd;

  class LieAlgebra
  {
  public:
    /// structure(K, I, J) = c^K_IJ with [e_I, e_J] = c^K_IJ e_K, stored as dim matrices
    /// C_K with (C_K)_{IJ} = c^K_IJ. Antisymmetry, the Jacobi identity, symmetry and
    /// definiteness of the metric and Ad-invariance are checked to the given tolerance.
    LieAlgebra(std::string name, std::vector<Eigen::MatrixXd> structure, Eigen::MatrixXd metric,
               double tolerance = 1e-13);

    const std::string & name() const { return m_name; }
    int dim() const { return int(m_metric.rows()); }

    double structure(int K, int I, int J) const { return m_structure[K](I, J); }
    const Eigen::MatrixXd & structure_matrix(int K) const { return m_structure[K]; }
    const Eigen::MatrixXd & metric() const { return m_metric; }

    /// f_{LIJ} = g_{LK} c^K_IJ, totally antisymmetric for an Ad-invariant metric
    double lowered(int L, int I, int J) const { return m_lowered[L](I, J); }

    bool is_abelian() const { return m_abelian; }

    LieVector bracket(const LieVector & a, const LieVector & b) const;
    double inner(const LieVector & a, const LieVector & b) const;

    /// max |c^K_IJ + c^K_JI| over all indices
    double antisymmetry_defect() const;
    /// max over (I,J,L,M) of the cyclic sum of [[e_I,e_J],e_L] coefficients
    double jacobi_defect() const;
    /// max over (I,J,K) of |f_IJK + f_JIK| and |f_IJK + f_IKJ|
    double ad_invariance_defect() const;

  private:
    std::string m_name;
    std::vector<Eigen::MatrixXd> m_structure;
    std::vector<Eigen::MatrixXd> m_lowered;
    Eigen::MatrixXd m_metric;
    bool m_abelian = true;
  };

  /// su(2) in the basis e_I = -(i/2) sigma_I: [e_1,e_2] = e_3 cyclically, metric delta
  LieAlgebra su2();

  /// The one-dimensional abelian algebra
  LieAlgebra u1();

  /// "su2" or "u1"
  LieAlgebra algebra_from_name(const std::string & name);

} // namespace ymddr

#endif
