#include <ymddr/errors.hpp>
#include <ymddr/polyquad.hpp>

#include <cmath>
#include <numbers>

namespace ymddr
{

  //------------------------------------------------------------------------------
  // One-dimensional Gauss-Legendre rules
  //------------------------------------------------------------------------------

  void gauss_legendre(int n, std::vector<double> & nodes, std::vector<double> & weights)
  {
    if (n < 1) {
      throw InvalidArgument("gauss_legendre: at least one node is required");
    }
    nodes.assign(n, 0.);
    weights.assign(n, 0.);
    for (int i = 0; i < n; ++i) {
      // Newton iteration on P_n from the Chebyshev-like initial guess
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 1.;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1., p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2. * k - 1.) * x * p1 - (k - 1.) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) {
          break;
        }
      }
      // Recompute the derivative at the converged node
      double p0 = 1., p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2. * k - 1.) * x * p1 - (k - 1.) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.);
      nodes[i] = 0.5 * (1. - x);
      weights[i] = 1. / ((1. - x * x) * dp * dp);
    }
  }

  //------------------------------------------------------------------------------
  // Simplex rules
  //------------------------------------------------------------------------------

  namespace
  {
    void check_degree(int degree)
    {
      if (degree < 0 || degree > max_quadrature_degree) {
        throw InvalidArgument("quadrature degree " + std::to_string(degree) + " outside [0, "
                              + std::to_string(max_quadrature_degree) + "]");
      }
    }

    int points_for(int degree) { return degree / 2 + 1; }

    void append(QuadratureRule & target, const QuadratureRule & source, double scale)
    {
      for (std::size_t i = 0; i < source.size(); ++i) {
        target.nodes.push_back(source.nodes[i]);
        target.weights.push_back(scale * source.weights[i]);
      }
    }
  } // namespace

  QuadratureRule segment_rule(const Vector3 & a, const Vector3 & b, int degree)
  {
    check_degree(degree);
    std::vector<double> x, w;
    gauss_legendre(points_for(degree), x, w);
    const double length = (b - a).norm();
    QuadratureRule qr;
    for (std::size_t i = 0; i < x.size(); ++i) {
      qr.nodes.push_back(a + x[i] * (b - a));
      qr.weights.push_back(length * w[i]);
    }
    return qr;
  }

  QuadratureRule triangle_rule(const Vector3 & a, const Vector3 & b, const Vector3 & c, int degree)
  {
    check_degree(degree);
    // Collapsed (Duffy) product rule; the Jacobian adds one degree in the first direction
    std::vector<double> x, w;
    gauss_legendre(points_for(degree + 1), x, w);
    const double area = 0.5 * (b - a).cross(c - a).norm();
    QuadratureRule qr;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double u = x[i];
        const double v = x[j] * (1. - u);
        qr.nodes.push_back(a + u * (b - a) + v * (c - a));
        qr.weights.push_back(2. * area * w[i] * w[j] * (1. - u));
      }
    }
    return qr;
  }

  QuadratureRule tetrahedron_rule(const Vector3 & a, const Vector3 & b, const Vector3 & c, const Vector3 & d,
                                  int degree)
  {
    check_degree(degree);
    std::vector<double> x, w;
    gauss_legendre(points_for(degree + 2), x, w);
    const double volume = std::abs((b - a).dot((c - a).cross(d - a))) / 6.;
    QuadratureRule qr;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (std::size_t k = 0; k < x.size(); ++k) {
          const double u = x[i];
          const double v = x[j] * (1. - u);
          const double s = x[k] * (1. - u - v);
          qr.nodes.push_back(a + u * (b - a) + v * (c - a) + s * (d - a));
          qr.weights.push_back(6. * volume * w[i] * w[j] * w[k] * (1. - u) * (1. - u) * (1. - x[j]));
        }
      }
    }
    return qr;
  }

  //------------------------------------------------------------------------------
  // Rules on mesh entities
  //------------------------------------------------------------------------------

  QuadratureRule rule(const Mesh & mesh, EntityId entity, int degree)
  {
    check_degree(degree);
    if (entity.index >= mesh.count(entity.kind)) {
      throw InvalidArgument(to_string(entity.kind) + " index out of range");
    }
    QuadratureRule qr;
    switch (entity.kind) {
    case EntityKind::vertex:
      qr.nodes.push_back(mesh.vertex(entity.index));
      qr.weights.push_back(1.);
      break;
    case EntityKind::edge: {
      const MeshEdge & E = mesh.edge(entity.index);
      qr = segment_rule(mesh.vertex(E.vertices[0]), mesh.vertex(E.vertices[1]), degree);
      break;
    }
    case EntityKind::face: {
      const MeshFace & F = mesh.face(entity.index);
      const std::size_t nv = F.vertices.size();
      for (std::size_t i = 0; i < nv; ++i) {
        const Vector3 & a = mesh.vertex(F.vertices[i]);
        const Vector3 & b = mesh.vertex(F.vertices[(i + 1) % nv]);
        const double signed_area = 0.5 * (a - F.centroid).cross(b - F.centroid).dot(F.normal);
        if (signed_area == 0.) {
          continue;
        }
        append(qr, triangle_rule(F.centroid, a, b, degree), signed_area > 0. ? 1. : -1.);
      }
      break;
    }
    case EntityKind::cell: {
      const MeshCell & T = mesh.cell(entity.index);
      for (std::size_t iF = 0; iF < T.faces.size(); ++iF) {
        const MeshFace & F = mesh.face(T.faces[iF]);
        const std::size_t nv = F.vertices.size();
        for (std::size_t i = 0; i < nv; ++i) {
          const Vector3 & a = mesh.vertex(F.vertices[i]);
          const Vector3 & b = mesh.vertex(F.vertices[(i + 1) % nv]);
          const double signed_volume =
            T.face_orientations[iF] * (F.centroid - T.centroid).dot((a - F.centroid).cross(b - F.centroid)) / 6.;
          if (signed_volume == 0.) {
            continue;
          }
          append(qr, tetrahedron_rule(T.centroid, F.centroid, a, b, degree), signed_volume > 0. ? 1. : -1.);
        }
      }
      break;
    }
    }
    return qr;
  }

  //------------------------------------------------------------------------------
  // Monomial basis
  //------------------------------------------------------------------------------

  MonomialBasis::MonomialBasis(const Mesh & mesh, EntityId entity, int degree)
    : m_degree(degree)
  {
    if (degree < 0) {
      throw InvalidArgument("MonomialBasis: negative degree");
    }
    if (entity.index >= mesh.count(entity.kind)) {
      throw InvalidArgument(to_string(entity.kind) + " index out of range");
    }
    int dim = 0;
    switch (entity.kind) {
    case EntityKind::vertex:
      m_center = mesh.vertex(entity.index);
      m_scale = 1.;
      m_frame.resize(3, 0);
      dim = 0;
      break;
    case EntityKind::edge: {
      const MeshEdge & E = mesh.edge(entity.index);
      m_center = E.midpoint;
      m_scale = E.length;
      m_frame = E.tangent;
      dim = 1;
      break;
    }
    case EntityKind::face: {
      const MeshFace & F = mesh.face(entity.index);
      m_center = F.centroid;
      m_scale = F.diameter;
      // First loop edge with a non-negligible in-plane component
      Vector3 tau1 = Vector3::Zero();
      for (std::size_t i = 0; i < F.vertices.size(); ++i) {
        Vector3 e = mesh.vertex(F.vertices[(i + 1) % F.vertices.size()]) - mesh.vertex(F.vertices[i]);
        e -= e.dot(F.normal) * F.normal;
        if (e.norm() > 1e-12 * F.diameter) {
          tau1 = e.normalized();
          break;
        }
      }
      if (tau1.isZero()) {
        throw DegenerateEntity("face " + std::to_string(entity.index) + " has no tangent frame");
      }
      m_frame.resize(3, 2);
      m_frame.col(0) = tau1;
      m_frame.col(1) = F.normal.cross(tau1);
      dim = 2;
      break;
    }
    case EntityKind::cell: {
      const MeshCell & T = mesh.cell(entity.index);
      m_center = T.centroid;
      m_scale = T.diameter;
      m_frame = Eigen::Matrix3d::Identity();
      dim = 3;
      break;
    }
    }
    if (!(m_scale > 0.)) {
      throw DegenerateEntity(to_string(entity.kind) + " " + std::to_string(entity.index) + " has zero diameter");
    }

    // Graded ordering: all powers of total degree 0, then 1, ...
    for (int d = 0; d <= (dim == 0 ? 0 : degree); ++d) {
      for (int a = d; a >= 0; --a) {
        for (int b = d - a; b >= 0; --b) {
          const int c = d - a - b;
          if ((dim < 2 && b > 0) || (dim < 3 && c > 0)) {
            continue;
          }
          m_powers.push_back({a, b, c});
        }
      }
    }
  }

  Eigen::VectorXd MonomialBasis::values(const Vector3 & x) const
  {
    const int dim = intrinsic_dimension();
    std::array<double, 3> y{0., 0., 0.};
    for (int i = 0; i < dim; ++i) {
      y[i] = (x - m_center).dot(m_frame.col(i)) / m_scale;
    }
    Eigen::VectorXd v(dimension());
    for (std::size_t j = 0; j < m_powers.size(); ++j) {
      const auto & p = m_powers[j];
      v(j) = std::pow(y[0], p[0]) * std::pow(y[1], p[1]) * std::pow(y[2], p[2]);
    }
    return v;
  }

  Eigen::Matrix<double, 3, Eigen::Dynamic> MonomialBasis::gradients(const Vector3 & x) const
  {
    const int dim = intrinsic_dimension();
    std::array<double, 3> y{0., 0., 0.};
    for (int i = 0; i < dim; ++i) {
      y[i] = (x - m_center).dot(m_frame.col(i)) / m_scale;
    }
    auto ipow = [](double base, int e) { return e <= 0 ? (e == 0 ? 1. : 0.) : std::pow(base, e); };
    Eigen::Matrix<double, 3, Eigen::Dynamic> G = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, dimension());
    for (std::size_t j = 0; j < m_powers.size(); ++j) {
      const auto & p = m_powers[j];
      for (int i = 0; i < dim; ++i) {
        if (p[i] == 0) {
          continue;
        }
        double d = p[i] / m_scale;
        for (int l = 0; l < 3; ++l) {
          d *= (l == i) ? ipow(y[l], p[l] - 1) : ipow(y[l], p[l]);
        }
        G.col(j) += d * m_frame.col(i);
      }
    }
    return G;
  }

  //------------------------------------------------------------------------------
  // L2 projections
  //------------------------------------------------------------------------------

  namespace
  {
    int target_degree(ProjectionTarget target)
    {
      switch (target.space) {
      case ProjectionSpace::polynomial:
        return target.degree;
      case ProjectionSpace::koszul_rc2:
        return 2;
      case ProjectionSpace::koszul_gc1:
      case ProjectionSpace::zero_mean_linear:
        return 1;
      }
      return 0;
    }

    template <typename Field, typename Value>
    Eigen::VectorXd project(const Mesh & mesh, EntityId entity, const Field & f, ProjectionTarget target,
                            int sampling_degree, bool vector_valued, Value to_vector)
    {
      const int deg = target_degree(target);
      const QuadratureRule qr = rule(mesh, entity, std::min(max_quadrature_degree, std::max(2 * deg, sampling_degree + deg)));
      Eigen::MatrixXd M;
      Eigen::VectorXd b;
      for (std::size_t iq = 0; iq < qr.size(); ++iq) {
        const Eigen::MatrixXd phi = target_basis(mesh, entity, target, qr.nodes[iq], vector_valued);
        const Eigen::VectorXd fq = to_vector(f(qr.nodes[iq]));
        if (iq == 0) {
          M = Eigen::MatrixXd::Zero(phi.cols(), phi.cols());
          b = Eigen::VectorXd::Zero(phi.cols());
        }
        M += qr.weights[iq] * phi.transpose() * phi;
        b += qr.weights[iq] * phi.transpose() * fq;
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
      if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 1e-14 * ldlt.vectorD().maxCoeff())) {
        throw DegenerateEntity("singular projection Gram on " + to_string(entity.kind) + " "
                               + std::to_string(entity.index));
      }
      return ldlt.solve(b);
    }
  } // namespace

  Eigen::MatrixXd target_basis(const Mesh & mesh, EntityId entity, ProjectionTarget target, const Vector3 & x,
                               bool vector_valued)
  {
    switch (target.space) {
    case ProjectionSpace::polynomial: {
      const MonomialBasis basis(mesh, entity, target.degree);
      const Eigen::VectorXd phi = basis.values(x);
      if (!vector_valued) {
        return phi.transpose();
      }
      const auto & frame = basis.frame();
      // Vertices carry full 3D vectors
      const Eigen::MatrixXd directions = frame.cols() == 0 ? Eigen::MatrixXd(Eigen::Matrix3d::Identity()) : Eigen::MatrixXd(frame);
      Eigen::MatrixXd B(3, phi.size() * directions.cols());
      for (Eigen::Index d = 0; d < directions.cols(); ++d) {
        for (Eigen::Index j = 0; j < phi.size(); ++j) {
          B.col(d * phi.size() + j) = phi(j) * directions.col(d);
        }
      }
      return B;
    }
    case ProjectionSpace::koszul_rc2: {
      if (!vector_valued) {
        throw InvalidArgument("R^{c,2} is a vector space");
      }
      const MonomialBasis basis(mesh, entity, 1);
      const Eigen::VectorXd phi = basis.values(x);
      const Vector3 r = (x - basis.center()) / basis.scale();
      return r * phi.transpose();
    }
    case ProjectionSpace::koszul_gc1: {
      if (!vector_valued) {
        throw InvalidArgument("G^{c,1} is a vector space");
      }
      if (entity.kind != EntityKind::cell) {
        throw InvalidArgument("G^{c,1} is only defined on cells");
      }
      const MonomialBasis basis(mesh, entity, 0);
      const Vector3 r = (x - basis.center()) / basis.scale();
      Eigen::MatrixXd B(3, 3);
      for (int i = 0; i < 3; ++i) {
        B.col(i) = r.cross(Vector3::Unit(i));
      }
      return B;
    }
    case ProjectionSpace::zero_mean_linear: {
      if (vector_valued) {
        throw InvalidArgument("P^{0,1} is a scalar space");
      }
      // Centred at the centroid, so first-degree monomials already have zero mean
      const MonomialBasis basis(mesh, entity, 1);
      const Eigen::VectorXd phi = basis.values(x);
      return phi.tail(phi.size() - 1).transpose();
    }
    }
    return {};
  }

  Eigen::VectorXd l2_project(const Mesh & mesh, EntityId entity, const ScalarField & f, ProjectionTarget target,
                             int sampling_degree)
  {
    return project(mesh, entity, f, target, sampling_degree, false,
                   [](double v) { return Eigen::VectorXd::Constant(1, v); });
  }

  Eigen::VectorXd l2_project(const Mesh & mesh, EntityId entity, const VectorField & f, ProjectionTarget target,
                             int sampling_degree)
  {
    return project(mesh, entity, f, target, sampling_degree, true,
                   [](const Vector3 & v) { return Eigen::VectorXd(v); });
  }

} // namespace ymddr
