#include <ymddr/errors.hpp>
#include <ymddr/solver.hpp>

#include <Eigen/SPQRSupport>
#include <Eigen/SparseLU>

#include <cholmod.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace ymddr
{

  //------------------------------------------------------------------------------
  // SPD solves
  //------------------------------------------------------------------------------

  SpdSolver::SpdSolver(const SparseMatrix & matrix)
    : m_matrix(matrix), m_factor(std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>())
  {
    if (matrix.rows() != matrix.cols()) {
      throw InvalidArgument("SpdSolver: matrix is not square");
    }
    m_factor->compute(m_matrix);
    if (m_factor->info() != Eigen::Success) {
      throw SolverError("Cholesky factorisation failed: matrix is not symmetric positive definite");
    }
  }

  Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd & b) const
  {
    if (!m_factor) {
      throw SolverError("SpdSolver used before factorisation");
    }
    if (b.size() != m_matrix.rows()) {
      throw InvalidArgument("SpdSolver: right-hand side has the wrong size");
    }
    const double nb = b.norm();
    Eigen::VectorXd x = m_factor->solve(b);
    if (nb == 0.) {
      return x;
    }
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 5; ++it) {
      const Eigen::VectorXd r = b - m_matrix * x;
      const double rel = r.norm() / nb;
      if (rel <= 1e-12 || rel >= 0.5 * previous) {
        break;
      }
      previous = rel;
      x += m_factor->solve(r);
    }
    return x;
  }

  Eigen::MatrixXd SpdSolver::solve(const Eigen::MatrixXd & b) const
  {
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      x.col(j) = solve(Eigen::VectorXd(b.col(j)));
    }
    return x;
  }

  Eigen::VectorXd solve_spd(const SparseMatrix & matrix, const Eigen::VectorXd & b)
  {
    return SpdSolver(matrix).solve(b);
  }

  //------------------------------------------------------------------------------
  // Least squares
  //------------------------------------------------------------------------------

  namespace
  {
    using ColMatrix = Eigen::SparseMatrix<double>;

    cholmod_sparse as_cholmod(ColMatrix & M, int stype)
    {
      cholmod_sparse A;
      A.nrow = M.rows();
      A.ncol = M.cols();
      A.nzmax = M.nonZeros();
      A.p = M.outerIndexPtr();
      A.i = M.innerIndexPtr();
      A.nz = nullptr;
      A.x = M.valuePtr();
      A.z = nullptr;
      A.stype = stype;
      A.itype = CHOLMOD_INT;
      A.xtype = CHOLMOD_REAL;
      A.dtype = CHOLMOD_DOUBLE;
      A.sorted = 1;
      A.packed = 1;
      return A;
    }

    // Factorisation of a dense SPD matrix through the supernodal path; detects broken BLAS kernels
    bool check_supernodal_cholesky()
    {
      const int n = 96;
      Eigen::MatrixXd B(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          B(i, j) = std::sin(1. + i + 3. * j) + (i == j ? 2. : 0.);
        }
      }
      const Eigen::MatrixXd S = B.transpose() * B;
      ColMatrix M = S.sparseView();
      M.makeCompressed();
      cholmod_common common;
      cholmod_start(&common);
      common.print = 0;
      common.supernodal = CHOLMOD_SUPERNODAL;
      cholmod_sparse A = as_cholmod(M, -1);
      cholmod_factor * L = cholmod_analyze(&A, &common);
      bool ok = L && cholmod_factorize(&A, L, &common) && common.status == CHOLMOD_OK;
      if (ok) {
        const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, 1., 2.);
        cholmod_dense rhs;
        rhs.nrow = n;
        rhs.ncol = 1;
        rhs.nzmax = n;
        rhs.d = n;
        rhs.x = const_cast<double *>(b.data());
        rhs.z = nullptr;
        rhs.xtype = CHOLMOD_REAL;
        rhs.dtype = CHOLMOD_DOUBLE;
        cholmod_dense * x = cholmod_solve(CHOLMOD_A, L, &rhs, &common);
        ok = x != nullptr;
        if (x) {
          const Eigen::Map<Eigen::VectorXd> xv(static_cast<double *>(x->x), n);
          ok = (S * xv - b).norm() <= 1e-8 * b.norm();
          cholmod_free_dense(&x, &common);
        }
      }
      if (L) {
        cholmod_free_factor(&L, &common);
      }
      cholmod_finish(&common);
      return ok;
    }

    // Cholesky factor of M^T M + shift I, computed from M without forming the product. The
    // symbolic analysis is kept while the sparsity pattern of M does not change.
    class NormalEquationsFactor
    {
    public:
      NormalEquationsFactor(const ColMatrix & matrix, double shift)
        : m_cache(cache())
      {
        m_transpose = matrix.transpose();
        m_transpose.makeCompressed();
        cholmod_sparse view = as_cholmod(m_transpose, 0);
        cholmod_common & common = m_cache.common;
        if (!m_cache.matches(m_transpose)) {
          m_cache.reset();
          m_cache.factor = cholmod_analyze(&view, &common);
          if (!m_cache.factor) {
            throw SolverError("analysis of the normal equations failed");
          }
          m_cache.store_pattern(m_transpose);
        }
        double beta[2] = {shift, 0.};
        if (!cholmod_factorize_p(&view, beta, nullptr, 0, m_cache.factor, &common) || common.status != CHOLMOD_OK) {
          const int status = common.status;
          m_cache.reset();
          throw SolverError("factorisation of the regularised normal equations failed (status "
                            + std::to_string(status) + ")");
        }
      }

      Eigen::VectorXd solve(const Eigen::VectorXd & b)
      {
        cholmod_dense rhs;
        rhs.nrow = b.size();
        rhs.ncol = 1;
        rhs.nzmax = b.size();
        rhs.d = b.size();
        rhs.x = const_cast<double *>(b.data());
        rhs.z = nullptr;
        rhs.xtype = CHOLMOD_REAL;
        rhs.dtype = CHOLMOD_DOUBLE;
        cholmod_dense * x = cholmod_solve(CHOLMOD_A, m_cache.factor, &rhs, &m_cache.common);
        if (!x) {
          throw SolverError("normal-equation solve failed");
        }
        Eigen::VectorXd out = Eigen::Map<Eigen::VectorXd>(static_cast<double *>(x->x), b.size());
        cholmod_free_dense(&x, &m_cache.common);
        return out;
      }

    private:
      struct Cache
      {
        cholmod_common common;
        cholmod_factor * factor = nullptr;
        Eigen::Index rows = -1, cols = -1;
        std::vector<int> outer, inner;

        Cache()
        {
          cholmod_start(&common);
          common.print = 0;
          common.supernodal = supernodal_cholesky_available() ? CHOLMOD_SUPERNODAL : CHOLMOD_SIMPLICIAL;
        }
        ~Cache()
        {
          reset();
          cholmod_finish(&common);
        }
        void reset()
        {
          if (factor) {
            cholmod_free_factor(&factor, &common);
          }
          rows = cols = -1;
        }
        bool matches(const ColMatrix & M) const
        {
          if (!factor || M.rows() != rows || M.cols() != cols || M.nonZeros() != Eigen::Index(inner.size())) {
            return false;
          }
          return std::equal(outer.begin(), outer.end(), M.outerIndexPtr())
                 && std::equal(inner.begin(), inner.end(), M.innerIndexPtr());
        }
        void store_pattern(const ColMatrix & M)
        {
          rows = M.rows();
          cols = M.cols();
          outer.assign(M.outerIndexPtr(), M.outerIndexPtr() + M.outerSize() + 1);
          inner.assign(M.innerIndexPtr(), M.innerIndexPtr() + M.nonZeros());
        }
      };

      static Cache & cache()
      {
        thread_local Cache c;
        return c;
      }

      Cache & m_cache;
      ColMatrix m_transpose;
    };

    struct ScaledSystem
    {
      ColMatrix scaled;        // M D
      Eigen::VectorXd scaling; // D
    };

    ScaledSystem scale_columns(const SparseMatrix & matrix)
    {
      ScaledSystem sys;
      ColMatrix M = matrix;
      sys.scaling = Eigen::VectorXd::Ones(M.cols());
      for (Eigen::Index j = 0; j < M.cols(); ++j) {
        const double norm = M.col(j).norm();
        if (norm > 0.) {
          sys.scaling(j) = 1. / norm;
        }
      }
      sys.scaled = M * sys.scaling.asDiagonal();
      sys.scaled.makeCompressed();
      return sys;
    }
  } // namespace

  bool supernodal_cholesky_available()
  {
    static const bool ok = check_supernodal_cholesky();
    return ok;
  }

  Eigen::VectorXd solve_least_squares(const SparseMatrix & matrix, const Eigen::VectorXd & b,
                                      LeastSquaresReport * report, const LeastSquaresOptions & options)
  {
    if (b.size() != matrix.rows()) {
      throw InvalidArgument("solve_least_squares: right-hand side has the wrong size");
    }
    LeastSquaresReport local;
    LeastSquaresReport & rep = report ? *report : local;
    rep = LeastSquaresReport{};

    const double nb = b.norm();
    if (nb == 0.) {
      return Eigen::VectorXd::Zero(matrix.cols());
    }

    const ScaledSystem ne = scale_columns(matrix);
    double shift = options.regularisation;
    auto factor = std::make_unique<NormalEquationsFactor>(ne.scaled, shift);
    // ||M D|| <= sqrt(n) for unit columns; use the Frobenius norm as a cheap bound
    const double norm_md = ne.scaled.norm();

    Eigen::VectorXd y = Eigen::VectorXd::Zero(matrix.cols());
    Eigen::VectorXd r = b;
    double best = std::numeric_limits<double>::infinity();
    int stagnation = 0, at_floor = 0;
    auto measure = [&](int it) {
      rep.relative_residual = r.norm() / nb;
      rep.normal_residual = (ne.scaled.transpose() * r).norm() / (norm_md * nb);
      rep.iterations = it;
    };
    int it = 0;
    for (; it <= options.max_iterations; ++it) {
      measure(it);
      if (rep.relative_residual <= options.target) {
        rep.consistent = true;
        return ne.scaling.asDiagonal() * y;
      }
      if (shift <= options.min_regularisation && ++at_floor > 20) {
        break;
      }
      if (rep.relative_residual < 0.9 * best) {
        best = rep.relative_residual;
        stagnation = 0;
      } else if (++stagnation >= 3) {
        // Components along tiny singular values converge at rate shift / (shift + sigma^2)
        if (shift <= options.min_regularisation) {
          break;
        }
        const double next = std::max(options.min_regularisation, 1e-3 * shift);
        factor.reset();
        try {
          factor = std::make_unique<NormalEquationsFactor>(ne.scaled, next);
        } catch (const SolverError &) {
          break; // numerically singular at this shift
        }
        shift = next;
        stagnation = 0;
      }
      y += factor->solve(ne.scaled.transpose() * r);
      r = b - ne.scaled * y;
    }
    factor.reset();

    // Orthogonal refinement of the remaining residual
    Eigen::SPQR<ColMatrix> qr(ne.scaled);
    if (qr.info() == Eigen::Success) {
      for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXd dy = qr.solve(r);
        const Eigen::VectorXd next = b - ne.scaled * (y + dy);
        if (!dy.allFinite() || next.norm() >= r.norm()) {
          break;
        }
        y += dy;
        r = next;
        measure(++it);
        if (rep.relative_residual <= options.target) {
          rep.consistent = true;
          return ne.scaling.asDiagonal() * y;
        }
      }
    }
    if (rep.normal_residual <= 1e-13) {
      rep.consistent = false;
      return ne.scaling.asDiagonal() * y;
    }
    std::ostringstream msg;
    msg << "least-squares solve stalled after " << rep.iterations << " iterations (relative residual "
        << rep.relative_residual << ", normal-equation residual " << rep.normal_residual << ")";
    throw SolverError(msg.str());
  }

  double estimate_min_singular_value(const SparseMatrix & matrix, int max_iterations, double tolerance)
  {
    ColMatrix M = matrix;
    M.makeCompressed();
    double max_col = 0.;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      max_col = std::max(max_col, M.col(j).squaredNorm());
    }
    if (max_col == 0.) {
      return 0.;
    }
    NormalEquationsFactor factor(M, 1e-24 * max_col);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    Eigen::VectorXd x(M.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = normal(rng);
    }
    x.normalize();
    double sigma = (M * x).norm();
    for (int it = 0; it < max_iterations; ++it) {
      Eigen::VectorXd y = factor.solve(x);
      const double norm = y.norm();
      if (!std::isfinite(norm) || norm == 0.) {
        break;
      }
      x = y / norm;
      const double next = (M * x).norm();
      if (std::abs(next - sigma) <= tolerance * std::max(next, 1e-300)) {
        return next;
      }
      sigma = next;
    }
    if (!std::isfinite(sigma)) {
      throw SolverError("estimate_min_singular_value: iteration diverged");
    }
    throw SolverError("estimate_min_singular_value: iteration budget exhausted (last estimate "
                      + std::to_string(sigma) + ")");
  }

  //------------------------------------------------------------------------------
  // Newton
  //------------------------------------------------------------------------------

  Eigen::VectorXd solve_linear(const SparseMatrix & matrix, const Eigen::VectorXd & rhs, LinearSolverMode mode,
                               double & relative_residual)
  {
    if (mode == LinearSolverMode::least_squares) {
      LeastSquaresReport rep;
      Eigen::VectorXd x = solve_least_squares(matrix, rhs, &rep);
      relative_residual = rep.relative_residual;
      return x;
    }
    ColMatrix M = matrix;
    Eigen::SparseLU<ColMatrix> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) {
      throw SolverError("sparse LU factorisation failed: " + lu.lastErrorMessage());
    }
    Eigen::VectorXd x = lu.solve(rhs);
    const double nb = rhs.norm();
    for (int it = 0; it < 3 && nb > 0.; ++it) {
      const Eigen::VectorXd r = rhs - M * x;
      if (r.norm() <= 1e-14 * nb) {
        break;
      }
      x += lu.solve(r);
    }
    relative_residual = nb > 0. ? (rhs - M * x).norm() / nb : 0.;
    return x;
  }

  NewtonResult newton_solve(const ResidualFunction & residual, const NewtonStepSolver & step_solver,
                            const Eigen::VectorXd & z0, const NewtonConfig & config, const Eigen::VectorXd & b)
  {
    if (!(config.tolerance > 0.)) {
      throw InvalidArgument("Newton tolerance must be positive");
    }
    NewtonResult result{z0, {}};
    NewtonReport & rep = result.report;
    const double nb = b.norm();
    rep.absolute = nb < 1e-300;
    const double scale = rep.absolute ? 1. : nb;

    Eigen::VectorXd f = residual(result.z) - b;
    if (f.size() != b.size()) {
      throw InvalidArgument("newton_solve: residual and right-hand side sizes differ");
    }
    rep.relative_residual = f.norm() / scale;
    rep.residuals.push_back(rep.relative_residual);
    while (rep.relative_residual > config.tolerance) {
      if (rep.iterations >= config.max_iterations || !std::isfinite(rep.relative_residual)) {
        std::ostringstream msg;
        msg << "Newton iterations did not converge: residual " << rep.relative_residual << " after "
            << rep.iterations << " iterations (tolerance " << config.tolerance << ")";
        throw ConvergenceError(msg.str());
      }
      double linear_residual = 0.;
      const Eigen::VectorXd dz = step_solver(result.z, -f, linear_residual);
      rep.linear_residuals.push_back(linear_residual);
      result.z += dz;
      ++rep.iterations;
      f = residual(result.z) - b;
      rep.relative_residual = f.norm() / scale;
      rep.residuals.push_back(rep.relative_residual);
    }
    rep.converged = true;
    return result;
  }

  NewtonResult newton_solve(const ResidualFunction & residual, const JacobianFunction & jacobian,
                            const Eigen::VectorXd & z0, const NewtonConfig & config, const Eigen::VectorXd & b)
  {
    const LinearSolverMode mode = config.linear_solver;
    return newton_solve(
      residual,
      [&](const Eigen::VectorXd & z, const Eigen::VectorXd & rhs, double & linear_residual) {
        return solve_linear(jacobian(z), rhs, mode, linear_residual);
      },
      z0, config, b);
  }

  double jacobian_fd_check(const ResidualFunction & residual, const JacobianFunction & jacobian,
                           const Eigen::VectorXd & z, double h_fd, int directions, std::uint64_t seed)
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const SparseMatrix J = jacobian(z);
    double worst = 0.;
    for (int k = 0; k < directions; ++k) {
      Eigen::VectorXd d(z.size());
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        d(i) = normal(rng);
      }
      d.normalize();
      const Eigen::VectorXd fd = (residual(z + h_fd * d) - residual(z - h_fd * d)) / (2. * h_fd);
      const Eigen::VectorXd an = J * d;
      const double denom = std::max({an.norm(), fd.norm(), 1e-300});
      worst = std::max(worst, (fd - an).norm() / denom);
    }
    return worst;
  }

} // namespace ymddr
