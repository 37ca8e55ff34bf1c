#include <ymddr/errors.hpp>
#include <ymddr/lie.hpp>

#include <algorithm>
#include <cmath>

namespace ymddr
{

  LieAlgebra::LieAlgebra(std::string name, std::vector<Eigen::MatrixXd> structure, Eigen::MatrixXd metric,
                         double tolerance)
    : m_name(std::move(name)), m_structure(std::move(structure)), m_metric(std::move(metric))
  {
    const int d = int(m_metric.rows());
    if (d < 1 || m_metric.cols() != d || int(m_structure.size()) != d) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': inconsistent dimensions");
    }
    for (const auto & C : m_structure) {
      if (C.rows() != d || C.cols() != d) {
        throw InvalidArgument("LieAlgebra '" + m_name + "': structure matrices must be dim x dim");
      }
      m_abelian = m_abelian && C.isZero(0.);
    }
    if ((m_metric - m_metric.transpose()).cwiseAbs().maxCoeff() > tolerance) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': metric is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m_metric);
    if (llt.info() != Eigen::Success) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': metric is not positive definite");
    }

    m_lowered.assign(d, Eigen::MatrixXd::Zero(d, d));
    for (int L = 0; L < d; ++L) {
      for (int K = 0; K < d; ++K) {
        m_lowered[L] += m_metric(L, K) * m_structure[K];
      }
    }

    if (antisymmetry_defect() > tolerance) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': structure constants are not antisymmetric");
    }
    if (jacobi_defect() > tolerance) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': Jacobi identity fails");
    }
    if (ad_invariance_defect() > tolerance) {
      throw InvalidArgument("LieAlgebra '" + m_name + "': metric is not Ad-invariant");
    }
  }

  LieVector LieAlgebra::bracket(const LieVector & a, const LieVector & b) const
  {
    if (a.size() != dim() || b.size() != dim()) {
      throw InvalidArgument("bracket: dimension mismatch");
    }
    LieVector c(dim());
    for (int K = 0; K < dim(); ++K) {
      c(K) = a.dot(m_structure[K] * b);
    }
    return c;
  }

  double LieAlgebra::inner(const LieVector & a, const LieVector & b) const
  {
    if (a.size() != dim() || b.size() != dim()) {
      throw InvalidArgument("inner: dimension mismatch");
    }
    return a.dot(m_metric * b);
  }

  double LieAlgebra::antisymmetry_defect() const
  {
    double defect = 0.;
    for (const auto & C : m_structure) {
      defect = std::max(defect, (C + C.transpose()).cwiseAbs().maxCoeff());
    }
    return defect;
  }

  double LieAlgebra::jacobi_defect() const
  {
    const int d = dim();
    double defect = 0.;
    for (int I = 0; I < d; ++I) {
      for (int J = 0; J < d; ++J) {
        for (int L = 0; L < d; ++L) {
          for (int M = 0; M < d; ++M) {
            double sum = 0.;
            for (int K = 0; K < d; ++K) {
              sum += structure(K, I, J) * structure(M, K, L) + structure(K, J, L) * structure(M, K, I)
                     + structure(K, L, I) * structure(M, K, J);
            }
            defect = std::max(defect, std::abs(sum));
          }
        }
      }
    }
    return defect;
  }

  double LieAlgebra::ad_invariance_defect() const
  {
    const int d = dim();
    double defect = 0.;
    for (int I = 0; I < d; ++I) {
      for (int J = 0; J < d; ++J) {
        for (int K = 0; K < d; ++K) {
          defect = std::max(defect, std::abs(lowered(I, J, K) + lowered(J, I, K)));
          defect = std::max(defect, std::abs(lowered(I, J, K) + lowered(I, K, J)));
        }
      }
    }
    return defect;
  }

  //------------------------------------------------------------------------------

  LieAlgebra su2()
  {
    std::vector<Eigen::MatrixXd> c(3, Eigen::MatrixXd::Zero(3, 3));
    // Levi-Civita: [e_I, e_J] = eps_IJK e_K
    for (int I = 0; I < 3; ++I) {
      const int J = (I + 1) % 3;
      const int K = (I + 2) % 3;
      c[K](I, J) = 1.;
      c[K](J, I) = -1.;
    }
    return LieAlgebra("su2", std::move(c), Eigen::MatrixXd::Identity(3, 3));
  }

  LieAlgebra u1()
  {
    return LieAlgebra("u1", {Eigen::MatrixXd::Zero(1, 1)}, Eigen::MatrixXd::Identity(1, 1));
  }

  LieAlgebra algebra_from_name(const std::string & name)
  {
    if (name == "su2") {
      return su2();
    }
    if (name == "u1") {
      return u1();
    }
    throw InvalidArgument("unknown Lie algebra '" + name + "' (expected su2 or u1)");
  }

} // namespace ymddr
