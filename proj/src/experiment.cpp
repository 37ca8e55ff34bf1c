#include <ymddr/errors.hpp>
#include <ymddr/experiment.hpp>

#include <cmath>
#include <iomanip>
#include <memory>
#include <random>

namespace ymddr
{

  InitialData parse_initial_data(const std::string & name)
  {
    if (name == "zero") {
      return InitialData::zero;
    }
    if (name == "gauge") {
      return InitialData::gauge;
    }
    if (name == "random") {
      return InitialData::random;
    }
    throw InvalidArgument("unknown initial data '" + name + "' (expected zero, gauge or random)");
  }

  namespace
  {
    Eigen::VectorXd random_vector(std::mt19937_64 & rng, std::size_t size)
    {
      std::uniform_real_distribution<double> unit(-1., 1.);
      Eigen::VectorXd v(size);
      for (auto & x : v) {
        x = unit(rng);
      }
      return v;
    }

    double curl_norm(const LADDRComplex & complex, const Eigen::VectorXd & v)
    {
      return std::sqrt(complex.inner(Space::curl, v, v));
    }
  } // namespace

  SolveOutcome run_solve(const SolveOptions & options, const std::function<void(const DiagnosticsRow &)> & on_row)
  {
    if (!(options.tmax > 0.)) {
      throw InvalidArgument("final time must be positive");
    }
    if (!(options.theta >= 0.5 && options.theta <= 1.)) {
      throw InvalidArgument("theta must lie in [1/2, 1]");
    }

    SolveOutcome out;
    out.mesh = options.mesh;
    const Mesh mesh = mesh_from_spec(options.mesh);
    const DDRComplex ddr(mesh);
    const LADDRComplex complex(ddr, algebra_from_name(options.algebra));

    out.h = mesh.h();
    out.steps = options.steps ? *options.steps : auto_step_count(out.h);
    if (out.steps <= 0) {
      throw InvalidArgument("the number of time steps must be positive");
    }
    out.dt = options.tmax / out.steps;

    SchemeConfig config;
    config.variant = options.variant;
    config.theta = options.theta;
    config.dt = out.dt;
    config.newton = default_newton_config(options.variant);
    config.newton.tolerance = options.newton_tolerance;
    config.newton.max_iterations = options.newton_max_iterations;
    config.manufactured = options.manufactured;
    const Scheme scheme(complex, config);

    std::unique_ptr<ManufacturedSolution> solution;
    if (options.manufactured || options.data == InitialData::gauge) {
      solution = std::make_unique<ManufacturedSolution>(complex.algebra());
    }
    if (options.manufactured) {
      out.self_test_defect = solution->self_test();
      if (!(out.self_test_defect <= self_test_tolerance)) {
        throw Error("manufactured solution self-test failed (discrepancy " + std::to_string(out.self_test_defect) +
                    ")");
      }
    }

    State initial;
    if (solution) {
      initial = scheme.interpolate_ics(solution->potential_field(0.), solution->electric_field(0.));
    } else if (options.data == InitialData::random) {
      std::mt19937_64 rng(options.seed);
      initial.A = random_vector(rng, scheme.curl_size());
      initial.E = random_vector(rng, scheme.curl_size());
      if (scheme.constrained()) {
        initial.lambda = Eigen::VectorXd::Zero(Eigen::Index(scheme.grad_size()));
      }
    } else {
      initial.A = Eigen::VectorXd::Zero(Eigen::Index(scheme.curl_size()));
      initial.E = initial.A;
      if (scheme.constrained()) {
        initial.lambda = Eigen::VectorXd::Zero(Eigen::Index(scheme.grad_size()));
      }
    }
    if (options.projected_ics) {
      initial = scheme.project_state(initial, &out.projection);
    }

    ForcingProvider forcing;
    if (options.manufactured) {
      forcing = manufactured_forcing(complex, *solution);
    }
    out.run = scheme.run(initial, out.steps, forcing, false, on_row);

    if (options.manufactured) {
      const double t = out.run.final_state.t;
      const Eigen::VectorXd A = la_interpolate_curl(mesh, complex.lie_dim(), solution->potential_field(t));
      const Eigen::VectorXd E = la_interpolate_curl(mesh, complex.lie_dim(), solution->electric_field(t));
      ManufacturedErrors errors;
      errors.A = curl_norm(complex, out.run.final_state.A - A) / curl_norm(complex, A);
      errors.E = curl_norm(complex, out.run.final_state.E - E) / curl_norm(complex, E);
      out.errors = errors;
    }
    return out;
  }

  std::optional<double> observed_rate(double h_prev, double e_prev, double h, double e)
  {
    const double dh = std::log(h_prev / h);
    if (std::abs(dh) < 1e-12 || !(e_prev > 0.) || !(e > 0.)) {
      return std::nullopt;
    }
    return std::log(e_prev / e) / dh;
  }

  std::vector<ConvergenceRow> run_convergence(const std::vector<std::string> & meshes, SolveOptions options,
                                              const std::function<void(const SolveOutcome &)> & on_run)
  {
    if (meshes.size() < 2) {
      throw InvalidArgument("a convergence study needs at least two meshes");
    }
    options.manufactured = true;
    std::vector<ConvergenceRow> rows;
    for (const std::string & spec : meshes) {
      options.mesh = spec;
      const SolveOutcome outcome = run_solve(options);
      if (on_run) {
        on_run(outcome);
      }
      ConvergenceRow row;
      row.mesh = spec;
      row.h = outcome.h;
      row.dt = outcome.dt;
      row.errors = *outcome.errors;
      if (!rows.empty()) {
        const ConvergenceRow & prev = rows.back();
        row.repeated_h = std::abs(std::log(prev.h / row.h)) < 1e-12;
        row.rate_A = observed_rate(prev.h, prev.errors.A, row.h, row.errors.A);
        row.rate_E = observed_rate(prev.h, prev.errors.E, row.h, row.errors.E);
      }
      rows.push_back(row);
    }
    return rows;
  }

  void write_convergence_csv(std::ostream & out, const std::vector<ConvergenceRow> & rows)
  {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "mesh,h,dt,err_A,err_E,rate_A,rate_E\n" << std::setprecision(16);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ConvergenceRow & r = rows[i];
      out << r.mesh << ',' << r.h << ',' << r.dt << ',' << r.errors.A << ',' << r.errors.E;
      for (const auto & rate : {r.rate_A, r.rate_E}) {
        out << ',';
        if (rate) {
          out << *rate;
        } else if (i > 0) {
          out << (r.repeated_h ? "undefined-same-h" : "undefined");
        }
      }
      out << '\n';
    }
    out.flags(flags);
    out.precision(precision);
  }

} // namespace ymddr
