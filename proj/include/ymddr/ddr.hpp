// Lowest-order discrete de Rham complex on polyhedral meshes: interpolators, discrete
// gradient/curl/divergence, potential reconstructions and stabilised inner products.
//
// Local dof ordering inside a cell follows MeshCell::vertices, MeshCell::edges (both
// sorted by global index) and MeshCell::faces. Inside a face it follows the loop
// MeshFace::vertices and MeshFace::edges.

#ifndef YMDDR_DDR_HPP
#define YMDDR_DDR_HPP

#include <ymddr/mesh.hpp>
#include <ymddr/polyquad.hpp>
#include <ymddr/sparse.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ymddr
{

  enum class Space
  {
    grad,
    curl,
    div
  };

  std::string to_string(Space space);

  using XGradVector = Eigen::VectorXd; ///< one value per vertex
  using XCurlVector = Eigen::VectorXd; ///< one tangential moment per edge
  using XDivVector = Eigen::VectorXd;  ///< one normal flux per face

  using Matrix3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;

  /// Face reconstructions, shared by the two cells of an interior face
  struct FaceOperators
  {
    std::size_t face = 0;
    MonomialBasis basis;   ///< P^1(F), ordered (1, y_1, y_2) with y_i = (x - x_F).tau_i / h_F
    Matrix3X grad;         ///< G_F: constant tangent vector per loop vertex
    Eigen::MatrixXd trace; ///< gamma_F: P^1(F) coefficients per loop vertex (3 x nV_F)
    Eigen::RowVectorXd curl;    ///< C_F per loop edge
    Matrix3X tangential_trace;  ///< gamma_t,F: constant tangent vector per loop edge
  };

  /// Cell reconstructions and local inner-product blocks
  struct CellOperatorCache
  {
    std::size_t cell = 0;
    MonomialBasis basis; ///< P^1(T), ordered (1, (x - x_T)/h_T)
    Eigen::MatrixXd mass; ///< integrals of products of basis functions (4 x 4)

    /// Cell-local positions of each face's loop vertices and loop edges
    std::vector<std::vector<std::size_t>> face_vertices;
    std::vector<std::vector<std::size_t>> face_edges;

    Matrix3X grad;                   ///< G_T (3 x nV_T)
    Eigen::MatrixXd potential_grad;  ///< P_grad in basis coefficients (4 x nV_T)
    Matrix3X curl;                   ///< C_T (3 x nE_T)
    Matrix3X potential_curl;         ///< P_curl (3 x nE_T)
    Eigen::RowVectorXd divergence;   ///< D_T (1 x nF_T)
    Matrix3X potential_div;          ///< P_div (3 x nF_T)

    Eigen::MatrixXd stabilisation_grad;
    Eigen::MatrixXd stabilisation_curl;
    Eigen::MatrixXd stabilisation_div;
    Eigen::MatrixXd gram_grad; ///< consistent part + stabilisation
    Eigen::MatrixXd gram_curl;
    Eigen::MatrixXd gram_div;

    const Eigen::MatrixXd & gram(Space space) const;
    const Eigen::MatrixXd & stabilisation(Space space) const;
  };

  //------------------------------------------------------------------------------
  // Interpolators and discrete operators
  //------------------------------------------------------------------------------

  XGradVector interpolate_grad(const Mesh & mesh, const ScalarField & f);
  /// Edge means of v.t_E, sampled with quadrature of the given degree
  XCurlVector interpolate_curl(const Mesh & mesh, const VectorField & v, int sampling_degree = 8);
  /// Face means of w.n_F
  XDivVector interpolate_div(const Mesh & mesh, const VectorField & w, int sampling_degree = 8);

  XCurlVector discrete_gradient(const Mesh & mesh, const XGradVector & q);
  XDivVector discrete_curl(const Mesh & mesh, const XCurlVector & v);
  /// One value per cell
  Eigen::VectorXd discrete_divergence(const Mesh & mesh, const XDivVector & w);

  /// Global matrices of the three discrete operators
  SparseMatrix gradient_matrix(const Mesh & mesh);
  SparseMatrix curl_matrix(const Mesh & mesh);
  SparseMatrix divergence_matrix(const Mesh & mesh);

  //------------------------------------------------------------------------------
  // Local reconstructions
  //------------------------------------------------------------------------------

  FaceOperators build_face_operators(const Mesh & mesh, std::size_t face);

  /// faces[i] must hold the operators of mesh.cell(cell).faces[i]
  CellOperatorCache build_cell_cache(const Mesh & mesh, std::size_t cell, const std::vector<const FaceOperators *> & faces);
  CellOperatorCache build_cell_cache(const Mesh & mesh, std::size_t cell);

  //------------------------------------------------------------------------------
  // Complex
  //------------------------------------------------------------------------------

  /// Caches of every face and cell of a mesh. The polynomial degree is a construction
  /// parameter so higher-order spaces can be added behind the same interface; only
  /// degree 0 is implemented.
  class DDRComplex
  {
  public:
    explicit DDRComplex(const Mesh & mesh, int degree = 0);

    const Mesh & mesh() const { return *m_mesh; }
    int degree() const { return m_degree; }

    std::size_t dimension(Space space) const;

    const FaceOperators & face_operators(std::size_t face) const { return m_faces[face]; }
    const CellOperatorCache & cell_cache(std::size_t cell) const { return m_cells[cell]; }

    /// Global indices of the dofs of a cell, in cell-local order
    const std::vector<std::size_t> & cell_dofs(Space space, std::size_t cell) const;
    Eigen::VectorXd restrict_to_cell(Space space, std::size_t cell, const Eigen::VectorXd & global) const;

    const SparseMatrix & gradient() const { return m_gradient; }
    const SparseMatrix & curl() const { return m_curl; }
    const SparseMatrix & divergence() const { return m_divergence; }

  private:
    const Mesh * m_mesh;
    int m_degree;
    std::vector<FaceOperators> m_faces;
    std::vector<CellOperatorCache> m_cells;
    SparseMatrix m_gradient;
    SparseMatrix m_curl;
    SparseMatrix m_divergence;
  };

  /// Global Gram matrix of (.,.)_{space,h}
  SparseMatrix assemble_gram(const DDRComplex & complex, Space space);

  /// Value of P_grad q_T at x
  double evaluate_potential_grad(const CellOperatorCache & cache, const Eigen::VectorXd & local, const Vector3 & x);

} // namespace ymddr

#endif
