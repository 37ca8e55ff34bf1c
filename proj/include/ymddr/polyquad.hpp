// Quadrature on edges, polygonal faces and polyhedral cells, scaled monomial bases
// and L2 projections onto the small polynomial spaces used by the lowest-order complex.

#ifndef YMDDR_POLYQUAD_HPP
#define YMDDR_POLYQUAD_HPP

#include <ymddr/mesh.hpp>

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <type_traits>
#include <vector>

namespace ymddr
{

  /// Nodes and weights; the weights sum to the measure of the entity
  struct QuadratureRule
  {
    std::vector<Vector3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    /// f must return a concrete value type (double, Vector3, ...)
    template <typename Function>
    auto integrate(Function && f) const
    {
      using Value = std::decay_t<decltype(f(nodes[0]))>;
      Value sum = f(nodes[0]) * weights[0];
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        sum += f(nodes[i]) * weights[i];
      }
      return sum;
    }
  };

  /// Largest exactness degree served by rule()
  inline constexpr int max_quadrature_degree = 12;

  /// Exact for polynomials of total degree <= degree. Faces are split into triangles
  /// from x_F, cells into tetrahedra from x_T over the face triangles. Vertices get a
  /// single unit-weight node.
  QuadratureRule rule(const Mesh & mesh, EntityId entity, int degree);

  /// Gauss-Legendre nodes and weights on [0,1]
  void gauss_legendre(int n, std::vector<double> & nodes, std::vector<double> & weights);

  QuadratureRule segment_rule(const Vector3 & a, const Vector3 & b, int degree);
  QuadratureRule triangle_rule(const Vector3 & a, const Vector3 & b, const Vector3 & c, int degree);
  QuadratureRule tetrahedron_rule(const Vector3 & a, const Vector3 & b, const Vector3 & c, const Vector3 & d, int degree);

  /// Scaled monomials ((x - x_P) . frame_i / h_P)^alpha of total degree <= degree,
  /// in the intrinsic coordinates of the entity (1D edges, 2D faces, 3D cells).
  class MonomialBasis
  {
  public:
    MonomialBasis(const Mesh & mesh, EntityId entity, int degree);

    std::size_t dimension() const { return m_powers.size(); }
    int degree() const { return m_degree; }
    int intrinsic_dimension() const { return int(m_frame.cols()); }
    const Vector3 & center() const { return m_center; }
    double scale() const { return m_scale; }
    /// Orthonormal frame of the entity (t_E; tau_1, tau_2 with tau_1 x tau_2 = n_F; canonical axes)
    const Eigen::Matrix<double, 3, Eigen::Dynamic> & frame() const { return m_frame; }

    Eigen::VectorXd values(const Vector3 & x) const;
    /// Columns are the ambient gradients of the basis functions
    Eigen::Matrix<double, 3, Eigen::Dynamic> gradients(const Vector3 & x) const;

  private:
    int m_degree;
    Vector3 m_center;
    double m_scale;
    Eigen::Matrix<double, 3, Eigen::Dynamic> m_frame;
    std::vector<std::array<int, 3>> m_powers;
  };

  /// Target spaces of l2_project
  enum class ProjectionSpace
  {
    polynomial,        ///< P^k(P), scalar or (tangential on faces) vector
    koszul_rc2,        ///< (x - x_P) P^1(P), vector
    koszul_gc1,        ///< (x - x_T) x R^3 on cells, vector
    zero_mean_linear,  ///< P^{0,1}(P), scalar
  };

  struct ProjectionTarget
  {
    ProjectionSpace space = ProjectionSpace::polynomial;
    int degree = 0; ///< only read for ProjectionSpace::polynomial
  };

  using ScalarField = std::function<double(const Vector3 &)>;
  using VectorField = std::function<Vector3(const Vector3 &)>;

  /// Basis of a target space evaluated at x; column j is basis function j.
  /// Scalar spaces give one row. Vector spaces give three rows; vector polynomials are
  /// tangent to edges and faces.
  Eigen::MatrixXd target_basis(const Mesh & mesh, EntityId entity, ProjectionTarget target, const Vector3 & x,
                               bool vector_valued);

  /// L2-orthogonal projection coefficients in target_basis. sampling_degree is the
  /// quadrature degree used for the field itself.
  Eigen::VectorXd l2_project(const Mesh & mesh, EntityId entity, const ScalarField & f, ProjectionTarget target,
                             int sampling_degree = 8);
  Eigen::VectorXd l2_project(const Mesh & mesh, EntityId entity, const VectorField & f, ProjectionTarget target,
                             int sampling_degree = 8);

} // namespace ymddr

#endif
