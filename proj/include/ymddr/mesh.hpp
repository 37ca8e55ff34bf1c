// Polyhedral mesh with oriented edges and faces and cached geometry.
//
// Conventions:
//  - t_E points from the lower to the higher global vertex index;
//  - n_F is the Newell normal of the stored vertex loop;
//  - n_FE = n_F x t_E, so that (t_E, n_FE, n_F) is right-handed;
//  - omega_FE n_FE points out of F, omega_TF n_F points out of T.

#ifndef YMDDR_MESH_HPP
#define YMDDR_MESH_HPP

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace ymddr
{

  using Vector3 = Eigen::Vector3d;

  enum class EntityKind
  {
    vertex,
    edge,
    face,
    cell
  };

  std::string to_string(EntityKind kind);

  struct EntityId
  {
    EntityKind kind;
    std::size_t index;
  };

  struct MeshEdge
  {
    std::array<std::size_t, 2> vertices; ///< ordered along the tangent
    Vector3 tangent;
    Vector3 midpoint;
    double length = 0.;
  };

  struct MeshFace
  {
    std::vector<std::size_t> vertices; ///< loop, oriented by the normal
    std::vector<std::size_t> edges;    ///< edges[i] joins vertices[i] and vertices[i+1]
    std::vector<int> edge_orientations;
    std::vector<Vector3> edge_normals; ///< n_FE, in the plane of the face
    std::vector<std::size_t> cells;
    Vector3 normal;
    Vector3 centroid;
    double area = 0.;
    double diameter = 0.;
  };

  struct MeshCell
  {
    std::vector<std::size_t> faces;
    std::vector<int> face_orientations;
    std::vector<std::size_t> edges;    ///< sorted global indices
    std::vector<std::size_t> vertices; ///< sorted global indices
    Vector3 centroid;
    double volume = 0.;
    double diameter = 0.;
  };

  /// Per-entity measures, centroids and diameters
  struct GeometryReport
  {
    std::vector<double> edge_lengths;
    std::vector<Vector3> edge_midpoints;
    std::vector<double> face_areas;
    std::vector<Vector3> face_centroids;
    std::vector<double> face_diameters;
    std::vector<double> cell_volumes;
    std::vector<Vector3> cell_centroids;
    std::vector<double> cell_diameters;
    double h = 0.;
  };

  /// Immutable polyhedral mesh. Built only through the validated factories below.
  class Mesh
  {
  public:
    /// Build from raw vertex coordinates, face loops and cell face lists (0-based).
    /// Edges are derived from the face loops. Throws ValidationError or DegenerateEntity.
    static Mesh from_polyhedra(std::vector<Vector3> vertices,
                               std::vector<std::vector<std::size_t>> faces,
                               std::vector<std::vector<std::size_t>> cells);

    std::size_t n_vertices() const { return m_vertices.size(); }
    std::size_t n_edges() const { return m_edges.size(); }
    std::size_t n_faces() const { return m_faces.size(); }
    std::size_t n_cells() const { return m_cells.size(); }
    std::size_t count(EntityKind kind) const;

    const Vector3 & vertex(std::size_t i) const { return m_vertices[i]; }
    const MeshEdge & edge(std::size_t i) const { return m_edges[i]; }
    const MeshFace & face(std::size_t i) const { return m_faces[i]; }
    const MeshCell & cell(std::size_t i) const { return m_cells[i]; }

    const std::vector<Vector3> & vertices() const { return m_vertices; }
    const std::vector<MeshEdge> & edges() const { return m_edges; }
    const std::vector<MeshFace> & faces() const { return m_faces; }
    const std::vector<MeshCell> & cells() const { return m_cells; }

    /// Mesh size: maximum cell diameter
    double h() const { return m_h; }

    /// True when the face belongs to a single cell
    bool is_boundary(std::size_t face) const { return m_faces[face].cells.size() == 1; }

    /// Position of a global edge/vertex inside a cell's sorted lists
    std::size_t local_edge(std::size_t cell, std::size_t edge) const;
    std::size_t local_vertex(std::size_t cell, std::size_t vertex) const;

    /// Sum of cell volumes
    double volume() const;

  private:
    Mesh() = default;

    std::vector<Vector3> m_vertices;
    std::vector<MeshEdge> m_edges;
    std::vector<MeshFace> m_faces;
    std::vector<MeshCell> m_cells;
    double m_h = 0.;
  };

  /// Uniform n x n x n partition of (0,1)^3 into cubes; face normals along +x, +y, +z
  Mesh build_cubic_mesh(std::size_t n);

  /// Parse the JSON polymesh format {"vertices": [...], "faces": [...], "cells": [...]}
  Mesh load_polymesh(std::istream & source);
  Mesh load_polymesh_file(const std::string & path);

  /// Resolve "cubic:N" generator specs or polymesh file paths
  Mesh mesh_from_spec(const std::string & spec);

  /// Write the JSON polymesh format
  void save_polymesh(const Mesh & mesh, std::ostream & sink);

  /// Relative orientation omega_TF (cell, face) or omega_FE (face, edge).
  /// Throws InvalidArgument when the pair is not incident or not one of these kinds.
  int orientation(const Mesh & mesh, EntityId outer, EntityId inner);

  /// Measures, centroids and diameters of every entity
  GeometryReport geometry_report(const Mesh & mesh);

} // namespace ymddr

#endif
