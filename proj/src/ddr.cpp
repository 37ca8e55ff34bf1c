#include <ymddr/ddr.hpp>
#include <ymddr/errors.hpp>

#include <algorithm>

namespace ymddr
{

  std::string to_string(Space space)
  {
    switch (space) {
    case Space::grad:
      return "grad";
    case Space::curl:
      return "curl";
    case Space::div:
      return "div";
    }
    return "?";
  }

  const Eigen::MatrixXd & CellOperatorCache::gram(Space space) const
  {
    switch (space) {
    case Space::grad:
      return gram_grad;
    case Space::curl:
      return gram_curl;
    default:
      return gram_div;
    }
  }

  const Eigen::MatrixXd & CellOperatorCache::stabilisation(Space space) const
  {
    switch (space) {
    case Space::grad:
      return stabilisation_grad;
    case Space::curl:
      return stabilisation_curl;
    default:
      return stabilisation_div;
    }
  }

  //------------------------------------------------------------------------------
  // Interpolators and discrete operators
  //------------------------------------------------------------------------------

  XGradVector interpolate_grad(const Mesh & mesh, const ScalarField & f)
  {
    XGradVector q(mesh.n_vertices());
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
      q(i) = f(mesh.vertex(i));
    }
    return q;
  }

  XCurlVector interpolate_curl(const Mesh & mesh, const VectorField & v, int sampling_degree)
  {
    XCurlVector x(mesh.n_edges());
    for (std::size_t iE = 0; iE < mesh.n_edges(); ++iE) {
      const MeshEdge & E = mesh.edge(iE);
      const QuadratureRule qr = rule(mesh, {EntityKind::edge, iE}, sampling_degree);
      x(iE) = qr.integrate([&](const Vector3 & p) { return v(p).dot(E.tangent); }) / E.length;
    }
    return x;
  }

  XDivVector interpolate_div(const Mesh & mesh, const VectorField & w, int sampling_degree)
  {
    XDivVector x(mesh.n_faces());
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace & F = mesh.face(iF);
      const QuadratureRule qr = rule(mesh, {EntityKind::face, iF}, sampling_degree);
      x(iF) = qr.integrate([&](const Vector3 & p) { return w(p).dot(F.normal); }) / F.area;
    }
    return x;
  }

  SparseMatrix gradient_matrix(const Mesh & mesh)
  {
    std::vector<Triplet> triplets;
    triplets.reserve(2 * mesh.n_edges());
    for (std::size_t iE = 0; iE < mesh.n_edges(); ++iE) {
      const MeshEdge & E = mesh.edge(iE);
      triplets.emplace_back(iE, E.vertices[0], -1. / E.length);
      triplets.emplace_back(iE, E.vertices[1], 1. / E.length);
    }
    SparseMatrix G(mesh.n_edges(), mesh.n_vertices());
    G.setFromTriplets(triplets.begin(), triplets.end());
    return G;
  }

  SparseMatrix curl_matrix(const Mesh & mesh)
  {
    std::vector<Triplet> triplets;
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace & F = mesh.face(iF);
      for (std::size_t i = 0; i < F.edges.size(); ++i) {
        triplets.emplace_back(iF, F.edges[i], -F.edge_orientations[i] * mesh.edge(F.edges[i]).length / F.area);
      }
    }
    SparseMatrix C(mesh.n_faces(), mesh.n_edges());
    C.setFromTriplets(triplets.begin(), triplets.end());
    return C;
  }

  SparseMatrix divergence_matrix(const Mesh & mesh)
  {
    std::vector<Triplet> triplets;
    for (std::size_t iT = 0; iT < mesh.n_cells(); ++iT) {
      const MeshCell & T = mesh.cell(iT);
      for (std::size_t i = 0; i < T.faces.size(); ++i) {
        triplets.emplace_back(iT, T.faces[i], T.face_orientations[i] * mesh.face(T.faces[i]).area / T.volume);
      }
    }
    SparseMatrix D(mesh.n_cells(), mesh.n_faces());
    D.setFromTriplets(triplets.begin(), triplets.end());
    return D;
  }

  XCurlVector discrete_gradient(const Mesh & mesh, const XGradVector & q)
  {
    if (std::size_t(q.size()) != mesh.n_vertices()) {
      throw InvalidArgument("discrete_gradient: expected one value per vertex");
    }
    XCurlVector v(mesh.n_edges());
    for (std::size_t iE = 0; iE < mesh.n_edges(); ++iE) {
      const MeshEdge & E = mesh.edge(iE);
      v(iE) = (q(E.vertices[1]) - q(E.vertices[0])) / E.length;
    }
    return v;
  }

  XDivVector discrete_curl(const Mesh & mesh, const XCurlVector & v)
  {
    if (std::size_t(v.size()) != mesh.n_edges()) {
      throw InvalidArgument("discrete_curl: expected one value per edge");
    }
    XDivVector w(mesh.n_faces());
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace & F = mesh.face(iF);
      double sum = 0.;
      for (std::size_t i = 0; i < F.edges.size(); ++i) {
        sum += F.edge_orientations[i] * mesh.edge(F.edges[i]).length * v(F.edges[i]);
      }
      w(iF) = -sum / F.area;
    }
    return w;
  }

  Eigen::VectorXd discrete_divergence(const Mesh & mesh, const XDivVector & w)
  {
    if (std::size_t(w.size()) != mesh.n_faces()) {
      throw InvalidArgument("discrete_divergence: expected one value per face");
    }
    Eigen::VectorXd d(mesh.n_cells());
    for (std::size_t iT = 0; iT < mesh.n_cells(); ++iT) {
      const MeshCell & T = mesh.cell(iT);
      double sum = 0.;
      for (std::size_t i = 0; i < T.faces.size(); ++i) {
        sum += T.face_orientations[i] * mesh.face(T.faces[i]).area * w(T.faces[i]);
      }
      d(iT) = sum / T.volume;
    }
    return d;
  }

  //------------------------------------------------------------------------------
  // Face reconstructions
  //------------------------------------------------------------------------------

  namespace
  {
    // Homogeneous degrees of the P^1 monomials (1, y_1, ..., y_d)
    int monomial_degree(Eigen::Index j) { return j == 0 ? 0 : 1; }

    Eigen::MatrixXd solve_local(const Eigen::MatrixXd & A, const Eigen::MatrixXd & B, const std::string & what)
    {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (!lu.isInvertible()) {
        throw DegenerateEntity("singular local system for " + what);
      }
      return lu.solve(B);
    }

    // Quadrature on edge (a, b) with linear interpolation weights of the endpoints
    struct EdgeNode
    {
      Vector3 x;
      double weight;
      double s; // barycentric coordinate of b
    };

    std::vector<EdgeNode> edge_nodes(const Vector3 & a, const Vector3 & b, int degree)
    {
      std::vector<double> s, w;
      gauss_legendre(degree / 2 + 1, s, w);
      const double length = (b - a).norm();
      std::vector<EdgeNode> nodes;
      for (std::size_t i = 0; i < s.size(); ++i) {
        nodes.push_back({a + s[i] * (b - a), length * w[i], s[i]});
      }
      return nodes;
    }
  } // namespace

  FaceOperators build_face_operators(const Mesh & mesh, std::size_t iF)
  {
    const MeshFace & F = mesh.face(iF);
    const std::size_t nv = F.vertices.size();
    FaceOperators ops{iF, MonomialBasis(mesh, {EntityKind::face, iF}, 1), Matrix3X::Zero(3, nv),
                      Eigen::MatrixXd::Zero(3, nv), Eigen::RowVectorXd::Zero(nv), Matrix3X::Zero(3, nv)};
    const MonomialBasis & basis = ops.basis;
    const double hF = basis.scale();

    // G_F from the edge integrals of the linear skeletal function
    for (std::size_t i = 0; i < nv; ++i) {
      const double length = mesh.edge(F.edges[i]).length;
      const Vector3 outward = F.edge_orientations[i] * F.edge_normals[i];
      ops.grad.col(i) += 0.5 * length / F.area * outward;
      ops.grad.col((i + 1) % nv) += 0.5 * length / F.area * outward;
    }

    // gamma_F: tested against v_b = (x - x_F)/h_F phi_b, div_F v_b = (2 + deg phi_b) phi_b / h_F
    const QuadratureRule qf = rule(mesh, {EntityKind::face, iF}, 2);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(3, nv);
    Matrix3X integral_v = Matrix3X::Zero(3, 3);
    for (std::size_t iq = 0; iq < qf.size(); ++iq) {
      const Eigen::VectorXd phi = basis.values(qf.nodes[iq]);
      const Vector3 r = (qf.nodes[iq] - F.centroid) / hF;
      for (int b = 0; b < 3; ++b) {
        const double div_b = (2. + monomial_degree(b)) * phi(b) / hF;
        A.row(b) += qf.weights[iq] * div_b * phi.transpose();
        integral_v.col(b) += qf.weights[iq] * phi(b) * r;
      }
    }
    rhs -= integral_v.transpose() * ops.grad;
    for (std::size_t i = 0; i < nv; ++i) {
      const Vector3 & a = mesh.vertex(F.vertices[i]);
      const Vector3 & b = mesh.vertex(F.vertices[(i + 1) % nv]);
      const Vector3 outward = F.edge_orientations[i] * F.edge_normals[i];
      for (const EdgeNode & node : edge_nodes(a, b, 3)) {
        const Eigen::VectorXd phi = basis.values(node.x);
        const double r_n = (node.x - F.centroid).dot(outward) / hF;
        rhs.col(i) += node.weight * (1. - node.s) * r_n * phi;
        rhs.col((i + 1) % nv) += node.weight * node.s * r_n * phi;
      }
    }
    ops.trace = solve_local(A, rhs, "the scalar trace of face " + std::to_string(iF));

    // C_F
    for (std::size_t i = 0; i < nv; ++i) {
      ops.curl(i) = -F.edge_orientations[i] * mesh.edge(F.edges[i]).length / F.area;
    }

    // gamma_t,F: tested against VROT_F r_i = (tau_i / h_F) x n_F, r_i = y_i
    const auto & tau = basis.frame();
    Eigen::Matrix2d M;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        M(i, j) = tau.col(j).dot(tau.col(i).cross(F.normal)) / hF;
      }
    }
    Eigen::MatrixXd grhs = Eigen::MatrixXd::Zero(2, nv);
    const Eigen::Vector2d mean_r = Eigen::Vector2d::Zero(); // r_i have zero mean on F
    for (std::size_t i = 0; i < nv; ++i) {
      const MeshEdge & E = mesh.edge(F.edges[i]);
      const Eigen::VectorXd phi_mid = basis.values(E.midpoint);
      grhs.col(i) += ops.curl(i) * mean_r;
      grhs.col(i) += F.edge_orientations[i] * E.length / F.area * phi_mid.tail(2);
    }
    const Eigen::MatrixXd g = solve_local(M, grhs, "the tangential trace of face " + std::to_string(iF));
    ops.tangential_trace = tau * g;
    return ops;
  }

  //------------------------------------------------------------------------------
  // Cell reconstructions
  //------------------------------------------------------------------------------

  CellOperatorCache build_cell_cache(const Mesh & mesh, std::size_t iT, const std::vector<const FaceOperators *> & faces)
  {
    const MeshCell & T = mesh.cell(iT);
    if (faces.size() != T.faces.size()) {
      throw InvalidArgument("build_cell_cache: one face operator per cell face is required");
    }
    const std::size_t nV = T.vertices.size();
    const std::size_t nE = T.edges.size();
    const std::size_t nF = T.faces.size();

    CellOperatorCache c{iT, MonomialBasis(mesh, {EntityKind::cell, iT}, 1), Eigen::MatrixXd::Zero(4, 4), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    const MonomialBasis & basis = c.basis;
    const double hT = basis.scale();

    for (std::size_t i = 0; i < nF; ++i) {
      const MeshFace & F = mesh.face(T.faces[i]);
      std::vector<std::size_t> lv, le;
      for (std::size_t v : F.vertices) {
        lv.push_back(mesh.local_vertex(iT, v));
      }
      for (std::size_t e : F.edges) {
        le.push_back(mesh.local_edge(iT, e));
      }
      c.face_vertices.push_back(std::move(lv));
      c.face_edges.push_back(std::move(le));
    }

    const QuadratureRule qt = rule(mesh, {EntityKind::cell, iT}, 2);
    for (std::size_t iq = 0; iq < qt.size(); ++iq) {
      const Eigen::VectorXd psi = basis.values(qt.nodes[iq]);
      c.mass += qt.weights[iq] * psi * psi.transpose();
    }

    // Scalar traces scattered to cell-local vertices
    std::vector<Eigen::MatrixXd> traces(nF, Eigen::MatrixXd::Zero(3, nV));
    for (std::size_t i = 0; i < nF; ++i) {
      for (std::size_t j = 0; j < c.face_vertices[i].size(); ++j) {
        traces[i].col(c.face_vertices[i][j]) += faces[i]->trace.col(j);
      }
    }

    // G_T
    c.grad = Matrix3X::Zero(3, nV);
    for (std::size_t i = 0; i < nF; ++i) {
      const MeshFace & F = mesh.face(T.faces[i]);
      c.grad += T.face_orientations[i] * F.area / T.volume * F.normal * traces[i].row(0);
    }

    // P_grad: tested against v_b = (x - x_T)/h_T psi_b, div v_b = (3 + deg psi_b) psi_b / h_T
    {
      Eigen::MatrixXd A(4, 4);
      for (int b = 0; b < 4; ++b) {
        A.row(b) = (3. + monomial_degree(b)) / hT * c.mass.row(b);
      }
      Matrix3X integral_v = Matrix3X::Zero(3, 4);
      for (std::size_t iq = 0; iq < qt.size(); ++iq) {
        const Eigen::VectorXd psi = basis.values(qt.nodes[iq]);
        integral_v += qt.weights[iq] * ((qt.nodes[iq] - T.centroid) / hT) * psi.transpose();
      }
      Eigen::MatrixXd rhs = -integral_v.transpose() * c.grad;
      for (std::size_t i = 0; i < nF; ++i) {
        const MeshFace & F = mesh.face(T.faces[i]);
        const QuadratureRule qf = rule(mesh, {EntityKind::face, T.faces[i]}, 3);
        Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(4, 3);
        for (std::size_t iq = 0; iq < qf.size(); ++iq) {
          const Eigen::VectorXd psi = basis.values(qf.nodes[iq]);
          const Eigen::VectorXd phi = faces[i]->basis.values(qf.nodes[iq]);
          const double r_n = (qf.nodes[iq] - T.centroid).dot(F.normal) / hT;
          coupling += qf.weights[iq] * r_n * psi * phi.transpose();
        }
        rhs += T.face_orientations[i] * coupling * traces[i];
      }
      c.potential_grad = solve_local(A, rhs, "the scalar potential of cell " + std::to_string(iT));
    }

    // Tangential traces scattered to cell-local edges
    std::vector<Matrix3X> gammas(nF, Matrix3X::Zero(3, nE));
    for (std::size_t i = 0; i < nF; ++i) {
      for (std::size_t j = 0; j < c.face_edges[i].size(); ++j) {
        gammas[i].col(c.face_edges[i][j]) += faces[i]->tangential_trace.col(j);
      }
    }

    // C_T and P_curl (tested against w = (x - x_T) x xi, curl w = -2 xi)
    c.curl = Matrix3X::Zero(3, nE);
    c.potential_curl = Matrix3X::Zero(3, nE);
    for (std::size_t i = 0; i < nF; ++i) {
      const MeshFace & F = mesh.face(T.faces[i]);
      const double scale = T.face_orientations[i] * F.area / T.volume;
      const Vector3 dx = F.centroid - T.centroid;
      const double dF = dx.dot(F.normal);
      for (std::size_t e = 0; e < nE; ++e) {
        const Vector3 g = gammas[i].col(e);
        c.curl.col(e) += scale * F.normal.cross(g);
        c.potential_curl.col(e) += 0.5 * scale * (dF * g - g.dot(dx) * F.normal);
      }
    }

    // D_T and P_div (tested against r = (x - x_T).e_i)
    c.divergence = Eigen::RowVectorXd::Zero(nF);
    c.potential_div = Matrix3X::Zero(3, nF);
    for (std::size_t i = 0; i < nF; ++i) {
      const MeshFace & F = mesh.face(T.faces[i]);
      const double scale = T.face_orientations[i] * F.area / T.volume;
      c.divergence(i) = scale;
      c.potential_div.col(i) = scale * (F.centroid - T.centroid);
    }

    // Stabilisations
    c.stabilisation_grad = Eigen::MatrixXd::Zero(nV, nV);
    c.stabilisation_curl = Eigen::MatrixXd::Zero(nE, nE);
    c.stabilisation_div = Eigen::MatrixXd::Zero(nF, nF);
    for (std::size_t i = 0; i < nF; ++i) {
      const MeshFace & F = mesh.face(T.faces[i]);
      const double hF = F.diameter;
      const QuadratureRule qf = rule(mesh, {EntityKind::face, T.faces[i]}, 2);
      for (std::size_t iq = 0; iq < qf.size(); ++iq) {
        const Eigen::RowVectorXd diff = basis.values(qf.nodes[iq]).transpose() * c.potential_grad
                                        - faces[i]->basis.values(qf.nodes[iq]).transpose() * traces[i];
        c.stabilisation_grad += hF * qf.weights[iq] * diff.transpose() * diff;
      }

      const Eigen::Matrix3d tangential = Eigen::Matrix3d::Identity() - F.normal * F.normal.transpose();
      const Matrix3X dcurl = tangential * c.potential_curl - gammas[i];
      c.stabilisation_curl += hF * F.area * dcurl.transpose() * dcurl;

      Eigen::RowVectorXd ddiv = F.normal.transpose() * c.potential_div;
      ddiv(i) -= 1.;
      c.stabilisation_div += hF * F.area * ddiv.transpose() * ddiv;
    }
    for (std::size_t e = 0; e < nE; ++e) {
      const MeshEdge & E = mesh.edge(T.edges[e]);
      const double hE2 = E.length * E.length;
      const std::size_t v0 = mesh.local_vertex(iT, E.vertices[0]);
      const std::size_t v1 = mesh.local_vertex(iT, E.vertices[1]);
      for (const EdgeNode & node : edge_nodes(mesh.vertex(E.vertices[0]), mesh.vertex(E.vertices[1]), 2)) {
        Eigen::RowVectorXd diff = basis.values(node.x).transpose() * c.potential_grad;
        diff(v0) -= 1. - node.s;
        diff(v1) -= node.s;
        c.stabilisation_grad += hE2 * node.weight * diff.transpose() * diff;
      }

      Eigen::RowVectorXd dcurl = E.tangent.transpose() * c.potential_curl;
      dcurl(e) -= 1.;
      c.stabilisation_curl += hE2 * E.length * dcurl.transpose() * dcurl;
    }

    // Local Gram blocks
    c.gram_grad = c.potential_grad.transpose() * c.mass * c.potential_grad + c.stabilisation_grad;
    c.gram_curl = T.volume * c.potential_curl.transpose() * c.potential_curl + c.stabilisation_curl;
    c.gram_div = T.volume * c.potential_div.transpose() * c.potential_div + c.stabilisation_div;
    for (Eigen::MatrixXd * M : {&c.gram_grad, &c.gram_curl, &c.gram_div}) {
      *M = 0.5 * (*M + M->transpose()).eval();
    }
    return c;
  }

  CellOperatorCache build_cell_cache(const Mesh & mesh, std::size_t cell)
  {
    std::vector<FaceOperators> storage;
    std::vector<const FaceOperators *> faces;
    for (std::size_t f : mesh.cell(cell).faces) {
      storage.push_back(build_face_operators(mesh, f));
    }
    for (const auto & ops : storage) {
      faces.push_back(&ops);
    }
    return build_cell_cache(mesh, cell, faces);
  }

  //------------------------------------------------------------------------------
  // Complex
  //------------------------------------------------------------------------------

  DDRComplex::DDRComplex(const Mesh & mesh, int degree)
    : m_mesh(&mesh), m_degree(degree)
  {
    if (degree != 0) {
      throw InvalidArgument("DDRComplex: only degree 0 is implemented (requested " + std::to_string(degree) + ")");
    }
    m_faces.reserve(mesh.n_faces());
    for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
      m_faces.push_back(build_face_operators(mesh, f));
    }
    m_cells.reserve(mesh.n_cells());
    for (std::size_t t = 0; t < mesh.n_cells(); ++t) {
      std::vector<const FaceOperators *> faces;
      for (std::size_t f : mesh.cell(t).faces) {
        faces.push_back(&m_faces[f]);
      }
      m_cells.push_back(build_cell_cache(mesh, t, faces));
    }
    m_gradient = gradient_matrix(mesh);
    m_curl = curl_matrix(mesh);
    m_divergence = divergence_matrix(mesh);
  }

  std::size_t DDRComplex::dimension(Space space) const
  {
    switch (space) {
    case Space::grad:
      return m_mesh->n_vertices();
    case Space::curl:
      return m_mesh->n_edges();
    default:
      return m_mesh->n_faces();
    }
  }

  const std::vector<std::size_t> & DDRComplex::cell_dofs(Space space, std::size_t cell) const
  {
    const MeshCell & T = m_mesh->cell(cell);
    switch (space) {
    case Space::grad:
      return T.vertices;
    case Space::curl:
      return T.edges;
    default:
      return T.faces;
    }
  }

  Eigen::VectorXd DDRComplex::restrict_to_cell(Space space, std::size_t cell, const Eigen::VectorXd & global) const
  {
    if (std::size_t(global.size()) != dimension(space)) {
      throw InvalidArgument("restrict_to_cell: vector size does not match the " + to_string(space) + " space");
    }
    const auto & dofs = cell_dofs(space, cell);
    Eigen::VectorXd local(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      local(i) = global(dofs[i]);
    }
    return local;
  }

  SparseMatrix assemble_gram(const DDRComplex & complex, Space space)
  {
    std::vector<Triplet> triplets;
    for (std::size_t t = 0; t < complex.mesh().n_cells(); ++t) {
      const auto & dofs = complex.cell_dofs(space, t);
      const Eigen::MatrixXd & M = complex.cell_cache(t).gram(space);
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        for (std::size_t j = 0; j < dofs.size(); ++j) {
          triplets.emplace_back(dofs[i], dofs[j], M(i, j));
        }
      }
    }
    const std::size_t n = complex.dimension(space);
    SparseMatrix G(n, n);
    G.setFromTriplets(triplets.begin(), triplets.end());
    return G;
  }

  double evaluate_potential_grad(const CellOperatorCache & cache, const Eigen::VectorXd & local, const Vector3 & x)
  {
    return cache.basis.values(x).dot(cache.potential_grad * local);
  }

} // namespace ymddr
