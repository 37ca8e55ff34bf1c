#include <doctest.h>

#include <ymddr/errors.hpp>
#include <ymddr/mesh.hpp>

#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace ymddr;

namespace
{
  long euler_characteristic(const Mesh & m)
  {
    return long(m.n_vertices()) - long(m.n_edges()) + long(m.n_faces()) - long(m.n_cells());
  }

  // Sum over the faces of a cell of omega_TF |F| n_F
  double closed_surface_defect(const Mesh & m)
  {
    double worst = 0.;
    for (std::size_t t = 0; t < m.n_cells(); ++t) {
      Vector3 s = Vector3::Zero();
      for (std::size_t f : m.cell(t).faces) {
        s += orientation(m, {EntityKind::cell, t}, {EntityKind::face, f}) * m.face(f).area * m.face(f).normal;
      }
      worst = std::max(worst, s.norm());
    }
    return worst;
  }
} // namespace

TEST_CASE("cubic mesh counts and geometry")
{
  const Mesh m = build_cubic_mesh(2);
  CHECK(m.n_vertices() == 27);
  CHECK(m.n_edges() == 54);
  CHECK(m.n_faces() == 36);
  CHECK(m.n_cells() == 8);
  CHECK(euler_characteristic(m) == 1);
  CHECK(m.volume() == doctest::Approx(1.).epsilon(1e-14));
  CHECK(m.h() == doctest::Approx(std::sqrt(3.) / 2.).epsilon(1e-14));
  for (const auto & T : m.cells()) {
    CHECK(T.volume == doctest::Approx(0.125).epsilon(1e-14));
  }
  for (const auto & F : m.faces()) {
    CHECK(F.area == doctest::Approx(0.25).epsilon(1e-14));
    // axis-aligned normals point along +x, +y or +z
    CHECK(F.normal.minCoeff() > -1e-14);
  }
  CHECK(closed_surface_defect(m) < 1e-14);
}

TEST_CASE("edge tangents point from the lower to the higher vertex index")
{
  const Mesh m = build_cubic_mesh(3);
  for (const auto & E : m.edges()) {
    CHECK(E.vertices[0] < E.vertices[1]);
    const Vector3 d = m.vertex(E.vertices[1]) - m.vertex(E.vertices[0]);
    CHECK((d.normalized() - E.tangent).norm() < 1e-14);
    CHECK(E.length == doctest::Approx(d.norm()));
  }
}

TEST_CASE("face edge normals lie in the face and point outwards")
{
  const Mesh m = testing::prism_mesh(2);
  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    const MeshFace & F = m.face(f);
    for (std::size_t j = 0; j < F.edges.size(); ++j) {
      const MeshEdge & E = m.edge(F.edges[j]);
      const Vector3 nFE = F.edge_normals[j];
      CHECK(std::abs(nFE.dot(F.normal)) < 1e-14);
      CHECK((nFE - F.normal.cross(E.tangent)).norm() < 1e-14);
      const int w = orientation(m, {EntityKind::face, f}, {EntityKind::edge, F.edges[j]});
      CHECK(w * nFE.dot(E.midpoint - F.centroid) > 0.);
    }
  }
}

TEST_CASE("cell face orientations give outward normals")
{
  for (const Mesh & m : {build_cubic_mesh(2), testing::kuhn_tetrahedral_mesh(2), testing::prism_mesh(2)}) {
    for (std::size_t t = 0; t < m.n_cells(); ++t) {
      for (std::size_t f : m.cell(t).faces) {
        const int w = orientation(m, {EntityKind::cell, t}, {EntityKind::face, f});
        CHECK(w * m.face(f).normal.dot(m.face(f).centroid - m.cell(t).centroid) > 0.);
      }
    }
    CHECK(closed_surface_defect(m) < 1e-14);
    CHECK(m.volume() == doctest::Approx(1.).epsilon(1e-13));
    CHECK(euler_characteristic(m) == 1);
  }
}

TEST_CASE("simplicial and prismatic meshes")
{
  const Mesh tets = testing::kuhn_tetrahedral_mesh(2);
  CHECK(tets.n_cells() == 48);
  for (const auto & T : tets.cells()) {
    CHECK(T.faces.size() == 4);
    CHECK(T.volume == doctest::Approx(1. / 48.).epsilon(1e-13));
  }
  const Mesh prisms = testing::prism_mesh(2);
  CHECK(prisms.n_cells() == 16);
  for (const auto & T : prisms.cells()) {
    CHECK(T.faces.size() == 5);
    CHECK(T.volume == doctest::Approx(1. / 16.).epsilon(1e-13));
  }
}

TEST_CASE("geometry report matches the mesh")
{
  const Mesh m = testing::prism_mesh(1);
  const GeometryReport g = geometry_report(m);
  REQUIRE(g.cell_volumes.size() == m.n_cells());
  REQUIRE(g.face_areas.size() == m.n_faces());
  CHECK(g.h == m.h());
  // the two prisms share the diagonal face
  CHECK(g.cell_volumes[0] == doctest::Approx(0.5));
  CHECK(g.cell_centroids[0].z() == doctest::Approx(0.5));
  for (std::size_t e = 0; e < m.n_edges(); ++e) {
    CHECK(g.edge_lengths[e] == m.edge(e).length);
  }
}

TEST_CASE("polymesh round trip")
{
  const Mesh m = testing::prism_mesh(2);
  std::stringstream buffer;
  save_polymesh(m, buffer);
  const Mesh r = load_polymesh(buffer);
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_edges() == m.n_edges());
  REQUIRE(r.n_faces() == m.n_faces());
  REQUIRE(r.n_cells() == m.n_cells());
  for (std::size_t i = 0; i < m.n_vertices(); ++i) {
    CHECK(r.vertex(i) == m.vertex(i));
  }
  for (std::size_t t = 0; t < m.n_cells(); ++t) {
    CHECK(r.cell(t).volume == m.cell(t).volume);
  }
}

TEST_CASE("imported tetrahedral mesh")
{
  const Mesh m = load_polymesh_file(testing::data_path("kuhn_tets_2.json"));
  CHECK(m.n_cells() == 48);
  CHECK(m.n_vertices() == 27);
  CHECK(m.volume() == doctest::Approx(1.).epsilon(1e-13));
  CHECK(mesh_from_spec(testing::data_path("kuhn_tets_2.json")).n_faces() == m.n_faces());
}

TEST_CASE("mesh specifications")
{
  CHECK(mesh_from_spec("cubic:3").n_cells() == 27);
  CHECK_THROWS_AS(mesh_from_spec("cubic:0"), ParseError);
  CHECK_THROWS_AS(mesh_from_spec("cubic:2x"), ParseError);
  CHECK_THROWS_AS(mesh_from_spec("/nonexistent/mesh.json"), ParseError);
  CHECK_THROWS_AS(build_cubic_mesh(0), InvalidArgument);
}

TEST_CASE("malformed polymesh input")
{
  std::stringstream broken("{\"vertices\": [[0,0,0]");
  CHECK_THROWS_AS(load_polymesh(broken), ParseError);
  std::stringstream missing("{\"vertices\": []}");
  CHECK_THROWS_AS(load_polymesh(missing), ParseError);
  std::stringstream short_vertex("{\"vertices\": [[0,0]], \"faces\": [], \"cells\": []}");
  CHECK_THROWS_AS(load_polymesh(short_vertex), ParseError);
}

TEST_CASE("invalid polyhedra are rejected")
{
  std::vector<Vector3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<std::vector<std::size_t>> faces{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  CHECK(Mesh::from_polyhedra(v, faces, {{0, 1, 2, 3}}).n_cells() == 1);
  // open surface
  CHECK_THROWS_AS(Mesh::from_polyhedra(v, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 1, 2}}, {{0, 1, 2, 4}}),
                  Error);
  CHECK_THROWS_AS(Mesh::from_polyhedra(v, faces, {{0, 1, 2}}), ValidationError);
  CHECK_THROWS_AS(Mesh::from_polyhedra(v, {{0, 1, 7}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, {{0, 1, 2, 3}}),
                  ValidationError);
  CHECK_THROWS_AS(Mesh::from_polyhedra(v, {{0, 1}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, {{0, 1, 2, 3}}),
                  DegenerateEntity);
  // flat tetrahedron
  std::vector<Vector3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  CHECK_THROWS_AS(Mesh::from_polyhedra(flat, faces, {{0, 1, 2, 3}}), Error);
}

TEST_CASE("orientation rejects non-incident pairs")
{
  const Mesh m = build_cubic_mesh(2);
  std::size_t far_face = 0;
  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    if (std::find(m.cell(0).faces.begin(), m.cell(0).faces.end(), f) == m.cell(0).faces.end()) {
      far_face = f;
      break;
    }
  }
  CHECK_THROWS_AS(orientation(m, {EntityKind::cell, 0}, {EntityKind::face, far_face}), InvalidArgument);
  CHECK_THROWS_AS(orientation(m, {EntityKind::cell, 0}, {EntityKind::edge, 0}), InvalidArgument);
  CHECK_THROWS_AS(m.local_edge(0, m.n_edges() - 1), InvalidArgument);
}
