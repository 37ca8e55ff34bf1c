#include <ymddr/errors.hpp>
#include <ymddr/laddr.hpp>

namespace ymddr
{

  SparseMatrix lift(const SparseMatrix & op, int lie_dim)
  {
    std::vector<Triplet> triplets;
    triplets.reserve(op.nonZeros() * lie_dim);
    for (Eigen::Index i = 0; i < op.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(op, i); it; ++it) {
        for (int I = 0; I < lie_dim; ++I) {
          triplets.emplace_back(it.row() * lie_dim + I, it.col() * lie_dim + I, it.value());
        }
      }
    }
    SparseMatrix L(op.rows() * lie_dim, op.cols() * lie_dim);
    L.setFromTriplets(triplets.begin(), triplets.end());
    return L;
  }

  SparseMatrix lift_gram(const SparseMatrix & gram, const Eigen::MatrixXd & metric)
  {
    const Eigen::Index d = metric.rows();
    std::vector<Triplet> triplets;
    triplets.reserve(gram.nonZeros() * d * d);
    for (Eigen::Index i = 0; i < gram.outerSize(); ++i) {
      for (SparseMatrix::InnerIterator it(gram, i); it; ++it) {
        for (Eigen::Index I = 0; I < d; ++I) {
          for (Eigen::Index J = 0; J < d; ++J) {
            if (metric(I, J) != 0.) {
              triplets.emplace_back(it.row() * d + I, it.col() * d + J, it.value() * metric(I, J));
            }
          }
        }
      }
    }
    SparseMatrix M(gram.rows() * d, gram.cols() * d);
    M.setFromTriplets(triplets.begin(), triplets.end());
    return M;
  }

  Eigen::VectorXd la_interpolate_grad(const Mesh & mesh, int lie_dim, const LieScalarField & f)
  {
    Eigen::VectorXd q(mesh.n_vertices() * lie_dim);
    for (std::size_t i = 0; i < mesh.n_vertices(); ++i) {
      const LieVector value = f(mesh.vertex(i));
      if (value.size() != lie_dim) {
        throw InvalidArgument("la_interpolate_grad: field has the wrong Lie dimension");
      }
      q.segment(i * lie_dim, lie_dim) = value;
    }
    return q;
  }

  Eigen::VectorXd la_interpolate_curl(const Mesh & mesh, int lie_dim, const LieVectorField & v, int sampling_degree)
  {
    Eigen::VectorXd x(mesh.n_edges() * lie_dim);
    for (std::size_t iE = 0; iE < mesh.n_edges(); ++iE) {
      const MeshEdge & E = mesh.edge(iE);
      const QuadratureRule qr = rule(mesh, {EntityKind::edge, iE}, sampling_degree);
      const Eigen::VectorXd mean =
        qr.integrate([&](const Vector3 & p) -> Eigen::VectorXd { return v(p).transpose() * E.tangent; }) / E.length;
      if (mean.size() != lie_dim) {
        throw InvalidArgument("la_interpolate_curl: field has the wrong Lie dimension");
      }
      x.segment(iE * lie_dim, lie_dim) = mean;
    }
    return x;
  }

  Eigen::VectorXd la_interpolate_div(const Mesh & mesh, int lie_dim, const LieVectorField & w, int sampling_degree)
  {
    Eigen::VectorXd x(mesh.n_faces() * lie_dim);
    for (std::size_t iF = 0; iF < mesh.n_faces(); ++iF) {
      const MeshFace & F = mesh.face(iF);
      const QuadratureRule qr = rule(mesh, {EntityKind::face, iF}, sampling_degree);
      const Eigen::VectorXd mean =
        qr.integrate([&](const Vector3 & p) -> Eigen::VectorXd { return w(p).transpose() * F.normal; }) / F.area;
      if (mean.size() != lie_dim) {
        throw InvalidArgument("la_interpolate_div: field has the wrong Lie dimension");
      }
      x.segment(iF * lie_dim, lie_dim) = mean;
    }
    return x;
  }

  //------------------------------------------------------------------------------

  LADDRComplex::LADDRComplex(const DDRComplex & ddr, LieAlgebra algebra)
    : m_ddr(&ddr), m_algebra(std::move(algebra))
  {
    const int d = lie_dim();
    m_gradient = lift(ddr.gradient(), d);
    m_curl = lift(ddr.curl(), d);
    m_divergence = lift(ddr.divergence(), d);
    m_gram_grad = lift_gram(assemble_gram(ddr, Space::grad), m_algebra.metric());
    m_gram_curl = lift_gram(assemble_gram(ddr, Space::curl), m_algebra.metric());
    m_gram_div = lift_gram(assemble_gram(ddr, Space::div), m_algebra.metric());
  }

  const SparseMatrix & LADDRComplex::gram(Space space) const
  {
    switch (space) {
    case Space::grad:
      return m_gram_grad;
    case Space::curl:
      return m_gram_curl;
    default:
      return m_gram_div;
    }
  }

  void LADDRComplex::check_size(Space space, const Eigen::VectorXd & x, const char * what) const
  {
    if (std::size_t(x.size()) != dimension(space)) {
      throw InvalidArgument(std::string(what) + ": expected a vector of the " + to_string(space) + " space of size "
                            + std::to_string(dimension(space)) + ", got " + std::to_string(x.size()));
    }
  }

  double LADDRComplex::inner(Space space, const Eigen::VectorXd & mu, const Eigen::VectorXd & zeta) const
  {
    check_size(space, mu, "inner");
    check_size(space, zeta, "inner");
    return mu.dot(gram(space) * zeta);
  }

  Matrix3X LADDRComplex::cell_potential_curl(std::size_t cell, const Eigen::VectorXd & v) const
  {
    const int d = lie_dim();
    const auto & edges = mesh().cell(cell).edges;
    Eigen::MatrixXd local(edges.size(), d);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      local.row(e) = v.segment(edges[e] * d, d).transpose();
    }
    return m_ddr->cell_cache(cell).potential_curl * local;
  }

  LieVector LADDRComplex::cell_mean_potential_grad(std::size_t cell, const Eigen::VectorXd & q) const
  {
    const int d = lie_dim();
    const auto & vertices = mesh().cell(cell).vertices;
    // The non-constant basis functions of P^1(T) have zero mean
    const Eigen::RowVectorXd mean = m_ddr->cell_cache(cell).potential_grad.row(0);
    LieVector result = LieVector::Zero(d);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      result += mean(i) * q.segment(vertices[i] * d, d);
    }
    return result;
  }

  Matrix3X LADDRComplex::face_tangential_trace(std::size_t face, const Eigen::VectorXd & v) const
  {
    const int d = lie_dim();
    const auto & edges = mesh().face(face).edges;
    Eigen::MatrixXd local(edges.size(), d);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      local.row(e) = v.segment(edges[e] * d, d).transpose();
    }
    return m_ddr->face_operators(face).tangential_trace * local;
  }

  Eigen::VectorXd LADDRComplex::bracket_curl_curl(const Eigen::VectorXd & v, const Eigen::VectorXd & w) const
  {
    check_size(Space::curl, v, "bracket_curl_curl");
    check_size(Space::curl, w, "bracket_curl_curl");
    const int d = lie_dim();
    Eigen::VectorXd result = Eigen::VectorXd::Zero(dimension(Space::div));
    if (m_algebra.is_abelian()) {
      return result;
    }
    for (std::size_t f = 0; f < mesh().n_faces(); ++f) {
      const Vector3 & n = mesh().face(f).normal;
      const Matrix3X gv = face_tangential_trace(f, v);
      const Matrix3X gw = face_tangential_trace(f, w);
      // cross(I, J) = n . (gv_I x gw_J)
      Eigen::MatrixXd cross(d, d);
      for (int I = 0; I < d; ++I) {
        for (int J = 0; J < d; ++J) {
          cross(I, J) = n.dot(Vector3(gv.col(I)).cross(Vector3(gw.col(J))));
        }
      }
      for (int K = 0; K < d; ++K) {
        result(f * d + K) = (m_algebra.structure_matrix(K).cwiseProduct(cross)).sum();
      }
    }
    return result;
  }

  double LADDRComplex::bracket_volume_integral(const Eigen::VectorXd & v, const Eigen::VectorXd & w,
                                               const Eigen::VectorXd & q) const
  {
    check_size(Space::curl, v, "bracket_volume_integral");
    check_size(Space::curl, w, "bracket_volume_integral");
    check_size(Space::grad, q, "bracket_volume_integral");
    if (m_algebra.is_abelian()) {
      return 0.;
    }
    const int d = lie_dim();
    double total = 0.;
    for (std::size_t t = 0; t < mesh().n_cells(); ++t) {
      const Matrix3X pv = cell_potential_curl(t, v);
      const Matrix3X pw = cell_potential_curl(t, w);
      const LieVector qbar = cell_mean_potential_grad(t, q);
      // Pair the antisymmetric indices first so that v = w cancels exactly
      double cell_sum = 0.;
      for (int L = 0; L < d; ++L) {
        for (int I = L + 1; I < d; ++I) {
          double omega = 0.;
          for (int mu = 0; mu < 3; ++mu) {
            omega += pv(mu, L) * pw(mu, I) - pv(mu, I) * pw(mu, L);
          }
          double f = 0.;
          for (int J = 0; J < d; ++J) {
            f += m_algebra.lowered(L, I, J) * qbar(J);
          }
          cell_sum += f * omega;
        }
      }
      total += mesh().cell(t).volume * cell_sum;
    }
    return total;
  }

  SparseMatrix LADDRComplex::bracket_curl_matrix(const Eigen::VectorXd & a) const
  {
    check_size(Space::curl, a, "bracket_curl_matrix");
    const int d = lie_dim();
    std::vector<Triplet> triplets;
    if (!m_algebra.is_abelian()) {
      for (std::size_t f = 0; f < mesh().n_faces(); ++f) {
        const MeshFace & F = mesh().face(f);
        const Matrix3X & gamma = m_ddr->face_operators(f).tangential_trace;
        const Matrix3X ga = face_tangential_trace(f, a);
        // nga(:, I) = n x gamma a_I
        Matrix3X nga(3, d);
        for (int I = 0; I < d; ++I) {
          nga.col(I) = F.normal.cross(Vector3(ga.col(I)));
        }
        const Eigen::MatrixXd proj = nga.transpose() * gamma; // (I, e)
        for (std::size_t e = 0; e < F.edges.size(); ++e) {
          for (int K = 0; K < d; ++K) {
            for (int J = 0; J < d; ++J) {
              double value = 0.;
              for (int I = 0; I < d; ++I) {
                value += m_algebra.structure(K, I, J) * proj(I, e);
              }
              if (value != 0.) {
                triplets.emplace_back(f * d + K, F.edges[e] * d + J, value);
              }
            }
          }
        }
      }
    }
    SparseMatrix B(dimension(Space::div), dimension(Space::curl));
    B.setFromTriplets(triplets.begin(), triplets.end());
    return B;
  }

  SparseMatrix LADDRComplex::bracket_curl_hessian(const Eigen::VectorXd & y) const
  {
    check_size(Space::div, y, "bracket_curl_hessian");
    const int d = lie_dim();
    std::vector<Triplet> triplets;
    if (!m_algebra.is_abelian()) {
      for (std::size_t f = 0; f < mesh().n_faces(); ++f) {
        const MeshFace & F = mesh().face(f);
        const Matrix3X & gamma = m_ddr->face_operators(f).tangential_trace;
        Eigen::MatrixXd yc = Eigen::MatrixXd::Zero(d, d); // sum_K y_K c^K_IJ
        for (int K = 0; K < d; ++K) {
          yc += y(f * d + K) * m_algebra.structure_matrix(K);
        }
        const std::size_t ne = F.edges.size();
        for (std::size_t e = 0; e < ne; ++e) {
          for (std::size_t e2 = 0; e2 < ne; ++e2) {
            const double s = F.normal.dot(Vector3(gamma.col(e)).cross(Vector3(gamma.col(e2))));
            if (s == 0.) {
              continue;
            }
            for (int I = 0; I < d; ++I) {
              for (int J = 0; J < d; ++J) {
                if (yc(I, J) != 0.) {
                  triplets.emplace_back(F.edges[e] * d + I, F.edges[e2] * d + J, yc(I, J) * s);
                }
              }
            }
          }
        }
      }
    }
    SparseMatrix N(dimension(Space::curl), dimension(Space::curl));
    N.setFromTriplets(triplets.begin(), triplets.end());
    return N;
  }

  SparseMatrix LADDRComplex::potential_bracket_matrix(const Eigen::VectorXd & a) const
  {
    check_size(Space::curl, a, "potential_bracket_matrix");
    const int d = lie_dim();
    std::vector<Triplet> triplets;
    if (!m_algebra.is_abelian()) {
      for (std::size_t t = 0; t < mesh().n_cells(); ++t) {
        const MeshCell & T = mesh().cell(t);
        const CellOperatorCache & cache = m_ddr->cell_cache(t);
        const Matrix3X pa = cell_potential_curl(t, a);
        const Eigen::MatrixXd W = cache.potential_curl.transpose() * pa; // (edge, I)
        const Eigen::RowVectorXd mean = cache.potential_grad.row(0);
        for (std::size_t e = 0; e < T.edges.size(); ++e) {
          for (int L = 0; L < d; ++L) {
            for (int J = 0; J < d; ++J) {
              double value = 0.;
              for (int I = 0; I < d; ++I) {
                value += m_algebra.lowered(L, I, J) * W(e, I);
              }
              if (value == 0.) {
                continue;
              }
              for (std::size_t v = 0; v < T.vertices.size(); ++v) {
                triplets.emplace_back(T.edges[e] * d + L, T.vertices[v] * d + J, T.volume * value * mean(v));
              }
            }
          }
        }
      }
    }
    SparseMatrix K(dimension(Space::curl), dimension(Space::grad));
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
  }

  SparseMatrix LADDRComplex::potential_bracket_multiplier_matrix(const Eigen::VectorXd & lambda) const
  {
    check_size(Space::grad, lambda, "potential_bracket_multiplier_matrix");
    const int d = lie_dim();
    std::vector<Triplet> triplets;
    if (!m_algebra.is_abelian()) {
      for (std::size_t t = 0; t < mesh().n_cells(); ++t) {
        const MeshCell & T = mesh().cell(t);
        const CellOperatorCache & cache = m_ddr->cell_cache(t);
        const LieVector lbar = cell_mean_potential_grad(t, lambda);
        Eigen::MatrixXd F = Eigen::MatrixXd::Zero(d, d); // F(L, I) = f_LIJ lbar_J
        for (int L = 0; L < d; ++L) {
          for (int I = 0; I < d; ++I) {
            for (int J = 0; J < d; ++J) {
              F(L, I) += m_algebra.lowered(L, I, J) * lbar(J);
            }
          }
        }
        const Eigen::MatrixXd PP = T.volume * cache.potential_curl.transpose() * cache.potential_curl;
        for (std::size_t e = 0; e < T.edges.size(); ++e) {
          for (std::size_t e2 = 0; e2 < T.edges.size(); ++e2) {
            for (int L = 0; L < d; ++L) {
              for (int I = 0; I < d; ++I) {
                if (F(L, I) != 0.) {
                  triplets.emplace_back(T.edges[e] * d + L, T.edges[e2] * d + I, PP(e, e2) * F(L, I));
                }
              }
            }
          }
        }
      }
    }
    SparseMatrix Q(dimension(Space::curl), dimension(Space::curl));
    Q.setFromTriplets(triplets.begin(), triplets.end());
    return Q;
  }

  //------------------------------------------------------------------------------

  double la_inner(const LADDRComplex & complex, Space space, const Eigen::VectorXd & mu, const Eigen::VectorXd & zeta)
  {
    return complex.inner(space, mu, zeta);
  }

  Eigen::VectorXd bracket_curl_curl(const LADDRComplex & complex, const Eigen::VectorXd & v, const Eigen::VectorXd & w)
  {
    return complex.bracket_curl_curl(v, w);
  }

  double bracket_volume_integral(const LADDRComplex & complex, const Eigen::VectorXd & v, const Eigen::VectorXd & w,
                                 const Eigen::VectorXd & q)
  {
    return complex.bracket_volume_integral(v, w, q);
  }

} // namespace ymddr
