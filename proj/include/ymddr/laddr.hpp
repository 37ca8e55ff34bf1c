// Lie algebra-valued DDR complex: tensorised dof vectors, lifted operators and
// inner products, and the two discrete Lie brackets.
//
// Storage is entity-major: the coefficient of e_I on entity i sits at index i * dim(g) + I.

#ifndef YMDDR_LADDR_HPP
#define YMDDR_LADDR_HPP

#include <ymddr/ddr.hpp>
#include <ymddr/lie.hpp>

#include <functional>

namespace ymddr
{

  /// Lie algebra-valued vector field: column I is the vector component along e_I
  using LieVectorField = std::function<Matrix3X(const Vector3 &)>;
  /// Lie algebra-valued scalar field
  using LieScalarField = std::function<LieVector(const Vector3 &)>;

  /// L (x) Id_g for a scalar operator L
  SparseMatrix lift(const SparseMatrix & op, int lie_dim);
  /// M (x) g for a scalar Gram matrix M and metric g
  SparseMatrix lift_gram(const SparseMatrix & gram, const Eigen::MatrixXd & metric);

  Eigen::VectorXd la_interpolate_grad(const Mesh & mesh, int lie_dim, const LieScalarField & f);
  Eigen::VectorXd la_interpolate_curl(const Mesh & mesh, int lie_dim, const LieVectorField & v, int sampling_degree = 8);
  Eigen::VectorXd la_interpolate_div(const Mesh & mesh, int lie_dim, const LieVectorField & w, int sampling_degree = 8);

  class LADDRComplex
  {
  public:
    /// The scalar complex must outlive this object
    LADDRComplex(const DDRComplex & ddr, LieAlgebra algebra);

    const DDRComplex & ddr() const { return *m_ddr; }
    const Mesh & mesh() const { return m_ddr->mesh(); }
    const LieAlgebra & algebra() const { return m_algebra; }
    int lie_dim() const { return m_algebra.dim(); }

    std::size_t dimension(Space space) const { return m_ddr->dimension(space) * lie_dim(); }

    const SparseMatrix & gradient() const { return m_gradient; }
    const SparseMatrix & curl() const { return m_curl; }
    const SparseMatrix & divergence() const { return m_divergence; }
    const SparseMatrix & gram(Space space) const;

    /// (mu, zeta)_{space,g,h}
    double inner(Space space, const Eigen::VectorXd & mu, const Eigen::VectorXd & zeta) const;

    /// Per face: [gamma_t,F v, gamma_t,F w] . n_F, an element of the div space
    Eigen::VectorXd bracket_curl_curl(const Eigen::VectorXd & v, const Eigen::VectorXd & w) const;

    /// sum_T int_T < P_curl v, [P_curl w, P_grad q] >
    double bracket_volume_integral(const Eigen::VectorXd & v, const Eigen::VectorXd & w, const Eigen::VectorXd & q) const;

    /// Matrix of w -> bracket_curl_curl(a, w)
    SparseMatrix bracket_curl_matrix(const Eigen::VectorXd & a) const;
    /// Symmetric matrix N with y . bracket_curl_curl(v, w) = v . N w
    SparseMatrix bracket_curl_hessian(const Eigen::VectorXd & y) const;
    /// K(a) with v . K(a) q = bracket_volume_integral(v, a, q)
    SparseMatrix potential_bracket_matrix(const Eigen::VectorXd & a) const;
    /// Q(lambda) with K(a) lambda = Q(lambda) a
    SparseMatrix potential_bracket_multiplier_matrix(const Eigen::VectorXd & lambda) const;

    /// P_curl of a curl-space vector on one cell (3 x dim g)
    Matrix3X cell_potential_curl(std::size_t cell, const Eigen::VectorXd & v) const;
    /// Mean of P_grad q over a cell (dim g)
    LieVector cell_mean_potential_grad(std::size_t cell, const Eigen::VectorXd & q) const;
    /// gamma_t,F of a curl-space vector (3 x dim g)
    Matrix3X face_tangential_trace(std::size_t face, const Eigen::VectorXd & v) const;

  private:
    void check_size(Space space, const Eigen::VectorXd & x, const char * what) const;

    const DDRComplex * m_ddr;
    LieAlgebra m_algebra;
    SparseMatrix m_gradient;
    SparseMatrix m_curl;
    SparseMatrix m_divergence;
    SparseMatrix m_gram_grad;
    SparseMatrix m_gram_curl;
    SparseMatrix m_gram_div;
  };

  double la_inner(const LADDRComplex & complex, Space space, const Eigen::VectorXd & mu, const Eigen::VectorXd & zeta);
  Eigen::VectorXd bracket_curl_curl(const LADDRComplex & complex, const Eigen::VectorXd & v, const Eigen::VectorXd & w);
  double bracket_volume_integral(const LADDRComplex & complex, const Eigen::VectorXd & v, const Eigen::VectorXd & w,
                                 const Eigen::VectorXd & q);

} // namespace ymddr

#endif
