// ymddr solve | converge

#include <ymddr/errors.hpp>
#include <ymddr/experiment.hpp>
#include <ymddr/runtime.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

using namespace ymddr;

namespace
{
  struct Flags
  {
    std::string mesh = "cubic:2";
    std::vector<std::string> meshes;
    std::string scheme = "ym-constrained";
    double theta = 1.;
    double tmax = 1.;
    std::string steps = "auto";
    std::string ic = "interpolate";
    bool manufactured = false;
    double newton_tol = 1e-6;
    int newton_max = 50;
    std::string algebra = "su2";
    std::string out;
    std::string errors_out;
    std::uint64_t seed = 1;
    std::string data = "zero";
  };

  void add_common(CLI::App * cmd, Flags & f)
  {
    cmd->add_option("--scheme", f.scheme, "maxwell | ym | ym-constrained")->capture_default_str();
    cmd->add_option("--theta", f.theta, "time-stepping parameter in [1/2, 1]")->capture_default_str();
    cmd->add_option("--tmax", f.tmax, "final time")->capture_default_str();
    cmd->add_option("--steps", f.steps, "auto | N")->capture_default_str();
    cmd->add_option("--ic", f.ic, "interpolate | projected")->capture_default_str();
    cmd->add_option("--newton-tol", f.newton_tol, "relative Newton tolerance")->capture_default_str();
    cmd->add_option("--newton-max", f.newton_max, "maximum Newton iterations per step")->capture_default_str();
    cmd->add_option("--algebra", f.algebra, "su2 | u1")->capture_default_str();
    cmd->add_option("--out", f.out, "CSV output file (default: standard output)");
  }

  SolveOptions to_options(const Flags & f)
  {
    SolveOptions o;
    o.mesh = f.mesh;
    o.variant = parse_scheme_variant(f.scheme);
    o.theta = f.theta;
    o.tmax = f.tmax;
    if (f.steps != "auto") {
      std::size_t used = 0;
      int n = 0;
      try {
        n = std::stoi(f.steps, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != f.steps.size() || n <= 0) {
        throw InvalidArgument("--steps expects 'auto' or a positive integer, got '" + f.steps + "'");
      }
      o.steps = n;
    }
    if (f.ic == "projected") {
      o.projected_ics = true;
    } else if (f.ic != "interpolate") {
      throw InvalidArgument("--ic expects 'interpolate' or 'projected', got '" + f.ic + "'");
    }
    o.manufactured = f.manufactured;
    o.data = parse_initial_data(f.data);
    o.newton_tolerance = f.newton_tol;
    o.newton_max_iterations = f.newton_max;
    o.algebra = f.algebra;
    o.seed = f.seed;
    return o;
  }

  std::ostream & open_output(const std::string & path, std::unique_ptr<std::ofstream> & file)
  {
    if (path.empty() || path == "-") {
      return std::cout;
    }
    file = std::make_unique<std::ofstream>(path);
    if (!*file) {
      throw Error("cannot open '" + path + "' for writing");
    }
    return *file;
  }
} // namespace

int main(int argc, char ** argv)
{
  select_reliable_blas(argc, argv);

  CLI::App app{"Lowest-order DDR schemes for the Maxwell and Yang-Mills equations"};
  app.require_subcommand(1);
  Flags f;

  CLI::App * solve = app.add_subcommand("solve", "run the scheme and write per-step diagnostics");
  solve->add_option("--mesh", f.mesh, "cubic:N or a polymesh JSON file")->capture_default_str();
  add_common(solve, f);
  solve->add_flag("--manufactured", f.manufactured, "use the manufactured solution as data and forcing");
  solve->add_option("--data", f.data, "initial data without --manufactured: zero | gauge | random")
    ->capture_default_str();
  solve->add_option("--seed", f.seed, "seed for --data random")->capture_default_str();
  solve->add_option("--errors-out", f.errors_out, "file for the final-time errors of manufactured runs");

  CLI::App * converge = app.add_subcommand("converge", "manufactured runs on a mesh sequence, with observed rates");
  converge->add_option("--mesh", f.meshes, "meshes, coarsest first")->required()->expected(2, -1);
  add_common(converge, f);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const SolveOptions options = to_options(f);
      std::unique_ptr<std::ofstream> file;
      std::ostream & out = open_output(f.out, file);
      write_diagnostics_header(out);
      const SolveOutcome outcome = run_solve(options, [&](const DiagnosticsRow & row) {
        write_diagnostics_row(out, row);
        out.flush();
      });
      if (options.projected_ics) {
        std::cerr << "projected initial conditions: relative residual " << outcome.projection.relative_residual
                  << '\n';
      }
      if (outcome.errors) {
        std::unique_ptr<std::ofstream> efile;
        std::ostream & eout = f.errors_out.empty() ? std::cerr : open_output(f.errors_out, efile);
        eout << "mesh,h,dt,err_A,err_E\n"
             << std::setprecision(16) << outcome.mesh << ',' << outcome.h << ',' << outcome.dt << ','
             << outcome.errors->A << ',' << outcome.errors->E << '\n';
      }
    } else if (*converge) {
      f.manufactured = true;
      SolveOptions options = to_options(f);
      const auto rows = run_convergence(f.meshes, options, [](const SolveOutcome & o) {
        std::cerr << o.mesh << ": err_A " << o.errors->A << ", err_E " << o.errors->E << '\n';
      });
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].repeated_h) {
          std::cerr << "warning: " << rows[i].mesh << " has the same size as the previous mesh; rate undefined\n";
        }
      }
      std::unique_ptr<std::ofstream> file;
      write_convergence_csv(open_output(f.out, file), rows);
    }
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
