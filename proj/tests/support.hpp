// Shared helpers for the unit tests: simplicial and prismatic meshes of the unit cube,
// random dof vectors.

#ifndef YMDDR_TESTS_SUPPORT_HPP
#define YMDDR_TESTS_SUPPORT_HPP

#include <ymddr/mesh.hpp>

#include <Eigen/Dense>

#include <random>
#include <string>

namespace ymddr::testing
{

  /// Each cube of the n^3 grid split into the six Kuhn tetrahedra around its main diagonal
  Mesh kuhn_tetrahedral_mesh(std::size_t n);

  /// Each cube of the n^3 grid split into two triangular prisms along x = y
  Mesh prism_mesh(std::size_t n);

  /// Uniform entries in [-1, 1]
  Eigen::VectorXd random_vector(std::mt19937_64 & rng, Eigen::Index size);

  /// Directory holding the test meshes
  std::string data_path(const std::string & name);

} // namespace ymddr::testing

#endif
