// Sparse linear solvers, Newton iteration and Jacobian diagnostics.

#ifndef YMDDR_SOLVER_HPP
#define YMDDR_SOLVER_HPP

#include <ymddr/sparse.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace ymddr
{

  /// Cholesky factorisation of a symmetric positive definite matrix, reusable across solves
  class SpdSolver
  {
  public:
    SpdSolver() = default;
    /// Throws SolverError when the matrix is not symmetric positive definite
    explicit SpdSolver(const SparseMatrix & matrix);

    /// Solution refined until the relative residual is <= 1e-12 (or stagnates)
    Eigen::VectorXd solve(const Eigen::VectorXd & b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd & b) const;

    Eigen::Index size() const { return m_matrix.rows(); }

  private:
    Eigen::SparseMatrix<double> m_matrix;
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> m_factor;
  };

  Eigen::VectorXd solve_spd(const SparseMatrix & matrix, const Eigen::VectorXd & b);

  struct LeastSquaresOptions
  {
    double target = 1e-9;          ///< relative residual ||b - Mx|| / ||b|| accepted as a solution
    double regularisation = 1e-10; ///< initial Tikhonov shift, relative to the unit column norms
    double min_regularisation = 1e-16; ///< floor for the shift, lowered when the iteration stalls
    int max_iterations = 200;
  };

  struct LeastSquaresReport
  {
    double relative_residual = 0.; ///< ||b - Mx|| / ||b|| (0 when b = 0)
    double normal_residual = 0.;   ///< ||M^T (b - Mx)|| / (||M^T|| ||b||)
    int iterations = 0;
    bool consistent = true;        ///< false when the target was not met but x minimises the residual
  };

  /// Minimiser of ||Mx - b||. Iterated Tikhonov regularisation on the column-scaled normal
  /// equations, started from 0, so the (scaled) minimal-norm minimiser is returned for
  /// rank-deficient systems. The shift is lowered when nearly singular directions stall
  /// the iteration. Throws SolverError when neither the residual target nor the
  /// least-squares optimality condition is reached.
  Eigen::VectorXd solve_least_squares(const SparseMatrix & matrix, const Eigen::VectorXd & b,
                                      LeastSquaresReport * report = nullptr, const LeastSquaresOptions & options = {});

  /// True when the supernodal (BLAS-based) sparse Cholesky passes a self-check. Some OpenBLAS
  /// kernels are unreliable on recent CPUs; the solvers then fall back to a simplicial factorisation.
  bool supernodal_cholesky_available();

  /// Smallest singular value by inverse iteration on the normal equations (diagnostic)
  double estimate_min_singular_value(const SparseMatrix & matrix, int max_iterations = 300, double tolerance = 1e-6);

  //------------------------------------------------------------------------------
  // Newton
  //------------------------------------------------------------------------------

  enum class LinearSolverMode
  {
    direct,       ///< sparse LU, for nonsingular Jacobians
    least_squares ///< solve_least_squares
  };

  struct NewtonConfig
  {
    double tolerance = 1e-6;
    int max_iterations = 50;
    LinearSolverMode linear_solver = LinearSolverMode::least_squares;
  };

  struct NewtonReport
  {
    int iterations = 0;
    double relative_residual = 0.; ///< ||F(z) - b|| / ||b||, or absolute when b = 0
    bool absolute = false;
    std::vector<double> residuals;        ///< one entry per iterate, including the initial guess
    std::vector<double> linear_residuals; ///< relative residual of each linear solve
    bool converged = false;
  };

  using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;
  using JacobianFunction = std::function<SparseMatrix(const Eigen::VectorXd &)>;
  /// Solves DF(z) dz = rhs and stores the achieved relative linear residual
  using NewtonStepSolver =
    std::function<Eigen::VectorXd(const Eigen::VectorXd & z, const Eigen::VectorXd & rhs, double & linear_residual)>;

  struct NewtonResult
  {
    Eigen::VectorXd z;
    NewtonReport report;
  };

  /// Solve F(z) = b by Newton iterations from z0. Stops when ||F(z) - b|| <= eps ||b||, or
  /// ||F(z) - b|| <= eps when ||b|| < 1e-300. Throws ConvergenceError after max_iterations.
  NewtonResult newton_solve(const ResidualFunction & residual, const JacobianFunction & jacobian,
                            const Eigen::VectorXd & z0, const NewtonConfig & config, const Eigen::VectorXd & b);

  /// Same iteration with a caller-provided linear step solver
  NewtonResult newton_solve(const ResidualFunction & residual, const NewtonStepSolver & step_solver,
                            const Eigen::VectorXd & z0, const NewtonConfig & config, const Eigen::VectorXd & b);

  /// Linear solve DF dz = rhs with the configured mode
  Eigen::VectorXd solve_linear(const SparseMatrix & matrix, const Eigen::VectorXd & rhs, LinearSolverMode mode,
                               double & relative_residual);

  /// Max over random unit directions d of ||(F(z+hd) - F(z-hd))/(2h) - DF(z)d|| / ||DF(z)d||
  double jacobian_fd_check(const ResidualFunction & residual, const JacobianFunction & jacobian,
                           const Eigen::VectorXd & z, double h_fd, int directions = 5, std::uint64_t seed = 1);

} // namespace ymddr

#endif
