#include <ymddr/mesh.hpp>
#include <ymddr/errors.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <queue>
#include <set>
#include <sstream>

using namespace ymddr;

namespace
{
  constexpr double planarity_tolerance = 1e-9;

  double point_set_diameter(const std::vector<Vector3> & points)
  {
    double diam = 0.;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        diam = std::max(diam, (points[i] - points[j]).norm());
      }
    }
    return diam;
  }

  std::string entity_label(const char * kind, std::size_t i)
  {
    return std::string(kind) + " " + std::to_string(i);
  }
} // namespace

std::string ymddr::to_string(EntityKind kind)
{
  switch (kind) {
  case EntityKind::vertex:
    return "vertex";
  case EntityKind::edge:
    return "edge";
  case EntityKind::face:
    return "face";
  case EntityKind::cell:
    return "cell";
  }
  return "unknown";
}

//------------------------------------------------------------------------------
// Construction
//------------------------------------------------------------------------------

Mesh Mesh::from_polyhedra(std::vector<Vector3> vertices,
                          std::vector<std::vector<std::size_t>> faces,
                          std::vector<std::vector<std::size_t>> cells)
{
  Mesh mesh;
  mesh.m_vertices = std::move(vertices);
  const std::size_t nV = mesh.m_vertices.size();

  if (nV == 0 || faces.empty() || cells.empty()) {
    throw ValidationError("mesh must have vertices, faces and cells");
  }

  // Edges from face loops, deduplicated by sorted vertex pair
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
  mesh.m_faces.resize(faces.size());
  for (std::size_t iF = 0; iF < faces.size(); ++iF) {
    const auto & loop = faces[iF];
    if (loop.size() < 3) {
      throw DegenerateEntity(entity_label("face", iF) + " has fewer than 3 vertices");
    }
    for (std::size_t v : loop) {
      if (v >= nV) {
        throw ValidationError(entity_label("face", iF) + " references missing vertex " + std::to_string(v));
      }
    }
    std::set<std::size_t> distinct(loop.begin(), loop.end());
    if (distinct.size() != loop.size()) {
      throw DegenerateEntity(entity_label("face", iF) + " has repeated vertices");
    }

    MeshFace & F = mesh.m_faces[iF];
    F.vertices = loop;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const std::size_t a = loop[i];
      const std::size_t b = loop[(i + 1) % loop.size()];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second}, mesh.m_edges.size());
      if (inserted) {
        MeshEdge E;
        E.vertices = {key.first, key.second};
        const Vector3 d = mesh.m_vertices[key.second] - mesh.m_vertices[key.first];
        E.length = d.norm();
        if (E.length <= 0.) {
          throw DegenerateEntity(entity_label("edge", mesh.m_edges.size()) + " has zero length");
        }
        E.tangent = d / E.length;
        E.midpoint = 0.5 * (mesh.m_vertices[key.first] + mesh.m_vertices[key.second]);
        mesh.m_edges.push_back(E);
      }
      F.edges.push_back(it->second);
      // The loop runs counter-clockwise around n_F, so n_FE = n_F x t_E points inwards
      // when the loop follows t_E.
      F.edge_orientations.push_back(a == key.first ? -1 : 1);
    }
  }

  // Face geometry
  for (std::size_t iF = 0; iF < mesh.m_faces.size(); ++iF) {
    MeshFace & F = mesh.m_faces[iF];
    std::vector<Vector3> pts;
    for (std::size_t v : F.vertices) {
      pts.push_back(mesh.m_vertices[v]);
    }
    F.diameter = point_set_diameter(pts);

    // Newell normal
    Vector3 area_vector = Vector3::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      area_vector += pts[i].cross(pts[(i + 1) % pts.size()]);
    }
    area_vector *= 0.5;
    const double newell_area = area_vector.norm();
    if (newell_area <= 1e-14 * F.diameter * F.diameter) {
      throw DegenerateEntity(entity_label("face", iF) + " has zero area");
    }
    F.normal = area_vector / newell_area;

    Vector3 p = Vector3::Zero();
    for (const auto & x : pts) {
      p += x;
    }
    p /= double(pts.size());
    double area = 0.;
    Vector3 moment = Vector3::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vector3 & a = pts[i];
      const Vector3 & b = pts[(i + 1) % pts.size()];
      const double tri = 0.5 * F.normal.dot((a - p).cross(b - p));
      area += tri;
      moment += tri * (p + a + b) / 3.;
    }
    if (area <= 1e-14 * F.diameter * F.diameter) {
      throw DegenerateEntity(entity_label("face", iF) + " has zero area");
    }
    F.area = area;
    F.centroid = moment / area;

    for (const auto & x : pts) {
      if (std::abs(F.normal.dot(x - F.centroid)) > planarity_tolerance * F.diameter) {
        throw ValidationError(entity_label("face", iF) + " is not planar");
      }
    }

    for (std::size_t i = 0; i < F.edges.size(); ++i) {
      const MeshEdge & E = mesh.m_edges[F.edges[i]];
      Vector3 nFE = F.normal.cross(E.tangent);
      F.edge_normals.push_back(nFE.normalized());
    }
  }

  // Cells
  mesh.m_cells.resize(cells.size());
  for (std::size_t iT = 0; iT < cells.size(); ++iT) {
    const auto & cell_faces = cells[iT];
    if (cell_faces.size() < 4) {
      throw ValidationError(entity_label("cell", iT) + " has fewer than 4 faces");
    }
    std::set<std::size_t> distinct(cell_faces.begin(), cell_faces.end());
    if (distinct.size() != cell_faces.size()) {
      throw ValidationError(entity_label("cell", iT) + " lists a face twice");
    }
    for (std::size_t f : cell_faces) {
      if (f >= mesh.m_faces.size()) {
        throw ValidationError(entity_label("cell", iT) + " references missing face " + std::to_string(f));
      }
      mesh.m_faces[f].cells.push_back(iT);
      if (mesh.m_faces[f].cells.size() > 2) {
        throw ValidationError(entity_label("face", f) + " is non-manifold (shared by more than two cells)");
      }
    }

    MeshCell & T = mesh.m_cells[iT];
    T.faces = cell_faces;

    // Closed surface: every edge shared by exactly two faces of the cell
    std::map<std::size_t, std::vector<std::size_t>> edge_faces;
    for (std::size_t lf = 0; lf < cell_faces.size(); ++lf) {
      for (std::size_t e : mesh.m_faces[cell_faces[lf]].edges) {
        edge_faces[e].push_back(lf);
      }
    }
    for (const auto & [e, lfs] : edge_faces) {
      if (lfs.size() != 2) {
        throw ValidationError(entity_label("cell", iT) + " has an open boundary at " + entity_label("edge", e));
      }
      T.edges.push_back(e);
    }

    // Consistent orientation of the boundary surface: two adjacent faces traverse their
    // shared edge in opposite directions once their orientations are applied.
    auto traversal = [&](std::size_t lf, std::size_t e) {
      const MeshFace & F = mesh.m_faces[cell_faces[lf]];
      const auto pos = std::find(F.edges.begin(), F.edges.end(), e) - F.edges.begin();
      return -F.edge_orientations[pos];
    };
    std::vector<int> sign(cell_faces.size(), 0);
    sign[0] = 1;
    std::queue<std::size_t> pending;
    pending.push(0);
    while (!pending.empty()) {
      const std::size_t lf = pending.front();
      pending.pop();
      for (std::size_t e : mesh.m_faces[cell_faces[lf]].edges) {
        const auto & lfs = edge_faces[e];
        const std::size_t other = lfs[0] == lf ? lfs[1] : lfs[0];
        const int expected = -sign[lf] * traversal(lf, e) * traversal(other, e);
        if (sign[other] == 0) {
          sign[other] = expected;
          pending.push(other);
        } else if (sign[other] != expected) {
          throw ValidationError(entity_label("cell", iT) + " has a non-orientable boundary");
        }
      }
    }
    if (std::find(sign.begin(), sign.end(), 0) != sign.end()) {
      throw ValidationError(entity_label("cell", iT) + " boundary is not connected");
    }

    std::set<std::size_t> vert_set;
    for (std::size_t f : cell_faces) {
      vert_set.insert(mesh.m_faces[f].vertices.begin(), mesh.m_faces[f].vertices.end());
    }
    T.vertices.assign(vert_set.begin(), vert_set.end());
    std::vector<Vector3> pts;
    Vector3 p = Vector3::Zero();
    for (std::size_t v : T.vertices) {
      pts.push_back(mesh.m_vertices[v]);
      p += mesh.m_vertices[v];
    }
    p /= double(pts.size());
    T.diameter = point_set_diameter(pts);

    double volume = 0.;
    Vector3 moment = Vector3::Zero();
    for (std::size_t lf = 0; lf < cell_faces.size(); ++lf) {
      const MeshFace & F = mesh.m_faces[cell_faces[lf]];
      for (std::size_t i = 0; i < F.vertices.size(); ++i) {
        const Vector3 & a = mesh.m_vertices[F.vertices[i]];
        const Vector3 & b = mesh.m_vertices[F.vertices[(i + 1) % F.vertices.size()]];
        const double tet = sign[lf] * (F.centroid - p).dot((a - p).cross(b - p)) / 6.;
        volume += tet;
        moment += tet * (p + F.centroid + a + b) / 4.;
      }
    }
    if (volume < 0.) {
      volume = -volume;
      moment = -moment;
      for (auto & s : sign) {
        s = -s;
      }
    }
    if (volume <= 1e-14 * std::pow(T.diameter, 3)) {
      throw DegenerateEntity(entity_label("cell", iT) + " has zero volume");
    }
    T.volume = volume;
    T.centroid = moment / volume;
    T.face_orientations = sign;

    Vector3 closure = Vector3::Zero();
    double surface = 0.;
    for (std::size_t lf = 0; lf < cell_faces.size(); ++lf) {
      const MeshFace & F = mesh.m_faces[cell_faces[lf]];
      closure += sign[lf] * F.area * F.normal;
      surface += F.area;
      if (sign[lf] * F.normal.dot(F.centroid - T.centroid) <= 0.) {
        throw ValidationError(entity_label("cell", iT) + ": outward normal of " + entity_label("face", cell_faces[lf])
                              + " does not point away from the cell centroid");
      }
    }
    if (closure.norm() > 1e-10 * surface) {
      throw ValidationError(entity_label("cell", iT) + " violates the closed-surface identity");
    }
  }

  for (std::size_t iF = 0; iF < mesh.m_faces.size(); ++iF) {
    const MeshFace & F = mesh.m_faces[iF];
    if (F.cells.empty()) {
      throw ValidationError(entity_label("face", iF) + " belongs to no cell");
    }
    if (F.cells.size() == 2) {
      const int w0 = orientation(mesh, {EntityKind::cell, F.cells[0]}, {EntityKind::face, iF});
      const int w1 = orientation(mesh, {EntityKind::cell, F.cells[1]}, {EntityKind::face, iF});
      if (w0 != -w1) {
        throw ValidationError(entity_label("face", iF) + " has inconsistent orientations in its two cells");
      }
    }
  }

  std::vector<bool> used(nV, false);
  for (const auto & T : mesh.m_cells) {
    for (std::size_t v : T.vertices) {
      used[v] = true;
    }
    mesh.m_h = std::max(mesh.m_h, T.diameter);
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw ValidationError("mesh has vertices that belong to no cell");
  }

  return mesh;
}

std::size_t Mesh::count(EntityKind kind) const
{
  switch (kind) {
  case EntityKind::vertex:
    return n_vertices();
  case EntityKind::edge:
    return n_edges();
  case EntityKind::face:
    return n_faces();
  case EntityKind::cell:
    return n_cells();
  }
  return 0;
}

std::size_t Mesh::local_edge(std::size_t cell, std::size_t edge) const
{
  const auto & edges = m_cells[cell].edges;
  auto it = std::lower_bound(edges.begin(), edges.end(), edge);
  if (it == edges.end() || *it != edge) {
    throw InvalidArgument(entity_label("edge", edge) + " is not in " + entity_label("cell", cell));
  }
  return std::size_t(it - edges.begin());
}

std::size_t Mesh::local_vertex(std::size_t cell, std::size_t vertex) const
{
  const auto & verts = m_cells[cell].vertices;
  auto it = std::lower_bound(verts.begin(), verts.end(), vertex);
  if (it == verts.end() || *it != vertex) {
    throw InvalidArgument(entity_label("vertex", vertex) + " is not in " + entity_label("cell", cell));
  }
  return std::size_t(it - verts.begin());
}

double Mesh::volume() const
{
  double v = 0.;
  for (const auto & T : m_cells) {
    v += T.volume;
  }
  return v;
}

//------------------------------------------------------------------------------
// Generators and I/O
//------------------------------------------------------------------------------

Mesh ymddr::build_cubic_mesh(std::size_t n)
{
  if (n == 0) {
    throw InvalidArgument("cubic mesh needs n >= 1");
  }
  const std::size_t np = n + 1;
  auto vid = [np](std::size_t i, std::size_t j, std::size_t k) { return i + np * (j + np * k); };

  std::vector<Vector3> vertices(np * np * np);
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t i = 0; i < np; ++i) {
        vertices[vid(i, j, k)] = Vector3(double(i), double(j), double(k)) / double(n);
      }
    }
  }

  std::vector<std::vector<std::size_t>> faces;
  // x-normal faces, indexed (i, j, k) with i in [0,n], j,k in [0,n)
  auto xface = [n](std::size_t i, std::size_t j, std::size_t k) { return i + (n + 1) * (j + n * k); };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < np; ++i) {
        faces.push_back({vid(i, j, k), vid(i, j + 1, k), vid(i, j + 1, k + 1), vid(i, j, k + 1)});
      }
    }
  }
  const std::size_t y_offset = faces.size();
  auto yface = [n, y_offset](std::size_t i, std::size_t j, std::size_t k) { return y_offset + i + n * (j + (n + 1) * k); };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        faces.push_back({vid(i, j, k), vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i + 1, j, k)});
      }
    }
  }
  const std::size_t z_offset = faces.size();
  auto zface = [n, z_offset](std::size_t i, std::size_t j, std::size_t k) { return z_offset + i + n * (j + n * k); };
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        faces.push_back({vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k)});
      }
    }
  }

  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        cells.push_back({xface(i, j, k), xface(i + 1, j, k), yface(i, j, k), yface(i, j + 1, k), zface(i, j, k), zface(i, j, k + 1)});
      }
    }
  }

  return Mesh::from_polyhedra(std::move(vertices), std::move(faces), std::move(cells));
}

Mesh ymddr::load_polymesh(std::istream & source)
{
  nlohmann::json doc;
  try {
    source >> doc;
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("polymesh: ") + e.what());
  }

  std::vector<Vector3> vertices;
  std::vector<std::vector<std::size_t>> faces;
  std::vector<std::vector<std::size_t>> cells;
  try {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("faces") || !doc.contains("cells")) {
      throw ParseError("polymesh: expected an object with \"vertices\", \"faces\" and \"cells\"");
    }
    for (const auto & v : doc.at("vertices")) {
      if (!v.is_array() || v.size() != 3) {
        throw ParseError("polymesh: each vertex must be an array of 3 numbers");
      }
      vertices.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    for (const auto & f : doc.at("faces")) {
      faces.push_back(f.get<std::vector<std::size_t>>());
    }
    for (const auto & c : doc.at("cells")) {
      cells.push_back(c.get<std::vector<std::size_t>>());
    }
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("polymesh: ") + e.what());
  }

  return Mesh::from_polyhedra(std::move(vertices), std::move(faces), std::move(cells));
}

Mesh ymddr::load_polymesh_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open mesh file " + path);
  }
  return load_polymesh(in);
}

Mesh ymddr::mesh_from_spec(const std::string & spec)
{
  const std::string prefix = "cubic:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string count = spec.substr(prefix.size());
    std::size_t pos = 0;
    long n = 0;
    try {
      n = std::stol(count, &pos);
    } catch (const std::exception &) {
      throw ParseError("invalid cubic mesh spec '" + spec + "'");
    }
    if (pos != count.size() || n < 1) {
      throw ParseError("invalid cubic mesh spec '" + spec + "'");
    }
    return build_cubic_mesh(std::size_t(n));
  }
  return load_polymesh_file(spec);
}

void ymddr::save_polymesh(const Mesh & mesh, std::ostream & sink)
{
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const auto & v : mesh.vertices()) {
    doc["vertices"].push_back({v.x(), v.y(), v.z()});
  }
  doc["faces"] = nlohmann::json::array();
  for (const auto & F : mesh.faces()) {
    doc["faces"].push_back(F.vertices);
  }
  doc["cells"] = nlohmann::json::array();
  for (const auto & T : mesh.cells()) {
    doc["cells"].push_back(T.faces);
  }
  // max_digits10 keeps coordinates bit-exact through the round trip
  sink << std::setprecision(17) << doc.dump() << '\n';
}

//------------------------------------------------------------------------------
// Queries
//------------------------------------------------------------------------------

int ymddr::orientation(const Mesh & mesh, EntityId outer, EntityId inner)
{
  if (outer.index >= mesh.count(outer.kind) || inner.index >= mesh.count(inner.kind)) {
    throw InvalidArgument("orientation: entity index out of range");
  }
  if (outer.kind == EntityKind::cell && inner.kind == EntityKind::face) {
    const auto & T = mesh.cell(outer.index);
    for (std::size_t i = 0; i < T.faces.size(); ++i) {
      if (T.faces[i] == inner.index) {
        return T.face_orientations[i];
      }
    }
  } else if (outer.kind == EntityKind::face && inner.kind == EntityKind::edge) {
    const auto & F = mesh.face(outer.index);
    for (std::size_t i = 0; i < F.edges.size(); ++i) {
      if (F.edges[i] == inner.index) {
        return F.edge_orientations[i];
      }
    }
  } else {
    throw InvalidArgument("orientation is defined for (cell, face) and (face, edge) pairs only");
  }
  throw InvalidArgument("orientation: " + to_string(inner.kind) + " " + std::to_string(inner.index) + " is not incident to "
                        + to_string(outer.kind) + " " + std::to_string(outer.index));
}

GeometryReport ymddr::geometry_report(const Mesh & mesh)
{
  GeometryReport report;
  for (const auto & E : mesh.edges()) {
    report.edge_lengths.push_back(E.length);
    report.edge_midpoints.push_back(E.midpoint);
  }
  for (const auto & F : mesh.faces()) {
    report.face_areas.push_back(F.area);
    report.face_centroids.push_back(F.centroid);
    report.face_diameters.push_back(F.diameter);
  }
  for (const auto & T : mesh.cells()) {
    report.cell_volumes.push_back(T.volume);
    report.cell_centroids.push_back(T.centroid);
    report.cell_diameters.push_back(T.diameter);
  }
  report.h = mesh.h();
  return report;
}
