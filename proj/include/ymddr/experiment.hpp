// Drivers behind the command-line tool: single runs with diagnostics and error
// measurement against the manufactured solution, and mesh-refinement studies.

#ifndef YMDDR_EXPERIMENT_HPP
#define YMDDR_EXPERIMENT_HPP

#include <ymddr/manufactured.hpp>
#include <ymddr/scheme.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ymddr
{

  /// Initial data of runs without the manufactured solution
  enum class InitialData
  {
    zero,
    gauge,  ///< the manufactured potential and field at t = 0, without forcing
    random  ///< uniform random dofs in [-1, 1]
  };

  InitialData parse_initial_data(const std::string & name);

  struct SolveOptions
  {
    std::string mesh = "cubic:2";
    SchemeVariant variant = SchemeVariant::ym_constrained;
    double theta = 1.;
    double tmax = 1.;
    std::optional<int> steps; ///< auto rule when empty
    bool projected_ics = false;
    bool manufactured = false;
    InitialData data = InitialData::zero;
    double newton_tolerance = 1e-6;
    int newton_max_iterations = 50;
    std::string algebra = "su2";
    std::uint64_t seed = 1;
  };

  struct ManufacturedErrors
  {
    double A = 0.; ///< ||A_h - I A(t)|| / ||I A(t)|| in the curl norm
    double E = 0.;
  };

  struct SolveOutcome
  {
    std::string mesh;
    double h = 0.;
    double dt = 0.;
    int steps = 0;
    RunResult run;
    LeastSquaresReport projection; ///< filled for projected initial conditions
    std::optional<ManufacturedErrors> errors;
    double self_test_defect = 0.; ///< manufactured runs only
  };

  /// Largest accepted discrepancy of ManufacturedSolution::self_test
  inline constexpr double self_test_tolerance = 1e-9;

  /// Build the mesh and complex, set up the initial state and forcing, run the scheme.
  /// Rows are passed to on_row as soon as they are computed.
  SolveOutcome run_solve(const SolveOptions & options, const std::function<void(const DiagnosticsRow &)> & on_row = {});

  struct ConvergenceRow
  {
    std::string mesh;
    double h = 0.;
    double dt = 0.;
    ManufacturedErrors errors;
    std::optional<double> rate_A; ///< empty on the first mesh and when h repeats
    std::optional<double> rate_E;
    bool repeated_h = false;
  };

  /// log(e_prev / e) / log(h_prev / h); empty when the two sizes coincide
  std::optional<double> observed_rate(double h_prev, double e_prev, double h, double e);

  /// Manufactured runs on each mesh, with the step count from the auto rule unless fixed
  std::vector<ConvergenceRow> run_convergence(const std::vector<std::string> & meshes, SolveOptions options,
                                              const std::function<void(const SolveOutcome &)> & on_run = {});

  void write_convergence_csv(std::ostream & out, const std::vector<ConvergenceRow> & rows);

} // namespace ymddr

#endif
