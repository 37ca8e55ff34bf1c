#include <ymddr/errors.hpp>
#include <ymddr/scheme.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace ymddr
{

  SchemeVariant parse_scheme_variant(const std::string & name)
  {
    if (name == "maxwell") {
      return SchemeVariant::maxwell;
    }
    if (name == "ym") {
      return SchemeVariant::ym_unconstrained;
    }
    if (name == "ym-constrained") {
      return SchemeVariant::ym_constrained;
    }
    throw InvalidArgument("unknown scheme '" + name + "' (expected maxwell, ym or ym-constrained)");
  }

  std::string to_string(SchemeVariant variant)
  {
    switch (variant) {
    case SchemeVariant::maxwell:
      return "maxwell";
    case SchemeVariant::ym_unconstrained:
      return "ym";
    case SchemeVariant::ym_constrained:
      return "ym-constrained";
    }
    return "?";
  }

  NewtonConfig default_newton_config(SchemeVariant variant)
  {
    NewtonConfig cfg;
    cfg.linear_solver =
      variant == SchemeVariant::ym_constrained ? LinearSolverMode::least_squares : LinearSolverMode::direct;
    return cfg;
  }

  int auto_step_count(double h)
  {
    if (!(h > 0.)) {
      throw InvalidArgument("auto_step_count: mesh size must be positive");
    }
    return std::max(10, int(std::ceil(5. / h - 1e-12)));
  }

  void write_diagnostics_header(std::ostream & out)
  {
    out << "step,time,energy_E,energy_B,newton_iters,newton_residual,constraint_drift_dual_norm,linear_residual_max\n";
  }

  void write_diagnostics_row(std::ostream & out, const DiagnosticsRow & row)
  {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(16) << row.step << ',' << row.time << ',' << row.energy_E << ',' << row.energy_B << ','
        << row.newton_iters << ',' << row.newton_residual << ',' << row.constraint_drift_dual_norm << ','
        << row.linear_residual_max << '\n';
    out.flags(flags);
    out.precision(precision);
  }

  //------------------------------------------------------------------------------
  // Helpers
  //------------------------------------------------------------------------------

  namespace
  {
    void add_block(std::vector<Triplet> & triplets, const SparseMatrix & block, Eigen::Index row0, Eigen::Index col0,
                   double scale = 1.)
    {
      if (scale == 0.) {
        return;
      }
      for (Eigen::Index i = 0; i < block.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(block, i); it; ++it) {
          triplets.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
        }
      }
    }
  } // namespace

  //------------------------------------------------------------------------------
  // Scheme
  //------------------------------------------------------------------------------

  Scheme::Scheme(const LADDRComplex & complex, SchemeConfig config)
    : m_complex(&complex), m_config(config)
  {
    if (!(config.theta >= 0.5 && config.theta <= 1.)) {
      throw InvalidArgument("theta must lie in [1/2, 1]");
    }
    if (!(config.dt > 0.)) {
      throw InvalidArgument("time step must be positive");
    }
    if (!(config.newton.tolerance > 0.)) {
      throw InvalidArgument("Newton tolerance must be positive");
    }
    m_curl_size = complex.dimension(Space::curl);
    m_grad_size = complex.dimension(Space::grad);
    m_mass_curl = complex.gram(Space::curl);
    m_mass_div = complex.gram(Space::div);
    m_grad = complex.gradient();
    m_curl = complex.curl();
    m_mass_curl_grad = m_mass_curl * m_grad;
    m_grad_gram_solver = SpdSolver(complex.gram(Space::grad));
  }

  std::size_t Scheme::unknowns() const
  {
    return 2 * m_curl_size + (constrained() ? m_grad_size : 0);
  }

  Eigen::VectorXd Scheme::magnetic_field(const Eigen::VectorXd & A) const
  {
    if (std::size_t(A.size()) != m_curl_size) {
      throw InvalidArgument("magnetic_field: potential has the wrong size");
    }
    Eigen::VectorXd B = m_curl * A;
    if (m_config.variant != SchemeVariant::maxwell && !m_complex->algebra().is_abelian()) {
      B += 0.5 * m_complex->bracket_curl_curl(A, A);
    }
    return B;
  }

  Eigen::VectorXd Scheme::constraint_functional(const Eigen::VectorXd & A, const Eigen::VectorXd & E) const
  {
    if (std::size_t(A.size()) != m_curl_size || std::size_t(E.size()) != m_curl_size) {
      throw InvalidArgument("constraint_functional: fields have the wrong size");
    }
    Eigen::VectorXd c = m_mass_curl_grad.transpose() * E;
    if (m_config.variant != SchemeVariant::maxwell && !m_complex->algebra().is_abelian()) {
      c += m_complex->potential_bracket_matrix(A).transpose() * E;
    }
    return c;
  }

  double Scheme::constraint_dual_norm(const Eigen::VectorXd & c) const
  {
    if (std::size_t(c.size()) != m_grad_size) {
      throw InvalidArgument("constraint_dual_norm: functional has the wrong size");
    }
    if (c.squaredNorm() == 0.) {
      return 0.;
    }
    return std::sqrt(std::max(0., c.dot(m_grad_gram_solver.solve(c))));
  }

  std::pair<double, double> Scheme::energy(const State & state) const
  {
    const Eigen::VectorXd B = magnetic_field(state.A);
    return {0.5 * state.E.dot(m_mass_curl * state.E), 0.5 * B.dot(m_mass_div * B)};
  }

  State Scheme::interpolate_ics(const LieVectorField & A0, const LieVectorField & E0) const
  {
    const Mesh & mesh = m_complex->mesh();
    const int d = m_complex->lie_dim();
    State s;
    s.A = la_interpolate_curl(mesh, d, A0);
    s.E = la_interpolate_curl(mesh, d, E0);
    if (constrained()) {
      s.lambda = Eigen::VectorXd::Zero(m_grad_size);
    }
    return s;
  }

  State Scheme::project_ics(const LieVectorField & A0, const LieVectorField & E0, LeastSquaresReport * report) const
  {
    return project_state(interpolate_ics(A0, E0), report);
  }

  State Scheme::project_state(const State & state, LeastSquaresReport * report) const
  {
    // [Mc   L(A)] [E     ]   [Mc E_I]
    // [L^T  0   ] [lambda] = [0     ]
    const Eigen::Index nE = m_curl_size, nV = m_grad_size;
    SparseMatrix L = m_mass_curl_grad;
    if (m_config.variant != SchemeVariant::maxwell && !m_complex->algebra().is_abelian()) {
      L += m_complex->potential_bracket_matrix(state.A);
    }
    std::vector<Triplet> triplets;
    add_block(triplets, m_mass_curl, 0, 0);
    add_block(triplets, L, 0, nE);
    add_block(triplets, SparseMatrix(L.transpose()), nE, 0);
    SparseMatrix M(nE + nV, nE + nV);
    M.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nE + nV);
    rhs.head(nE) = m_mass_curl * state.E;
    const Eigen::VectorXd x = solve_least_squares(M, rhs, report);

    State s = state;
    s.E = x.head(nE);
    if (constrained()) {
      s.lambda = x.tail(nV);
    }
    return s;
  }

  Eigen::VectorXd Scheme::pack(const State & state) const
  {
    Eigen::VectorXd z(unknowns());
    z.head(m_curl_size) = state.A;
    z.segment(m_curl_size, m_curl_size) = state.E;
    if (constrained()) {
      z.tail(m_grad_size) =
        state.lambda.size() == 0 ? Eigen::VectorXd::Zero(m_grad_size) : Eigen::VectorXd(state.lambda);
    }
    return z;
  }

  State Scheme::unpack(const Eigen::VectorXd & z, double t, int level) const
  {
    if (std::size_t(z.size()) != unknowns()) {
      throw InvalidArgument("unpack: vector has the wrong size");
    }
    State s;
    s.A = z.head(m_curl_size);
    s.E = z.segment(m_curl_size, m_curl_size);
    if (constrained()) {
      s.lambda = z.tail(m_grad_size);
    }
    s.t = t;
    s.level = level;
    return s;
  }

  Scheme::StepSources Scheme::evaluate_sources(const State & previous, const ForcingProvider & forcing) const
  {
    StepSources sources;
    const double t_theta = previous.t + m_config.theta * m_config.dt;
    if (forcing.source) {
      sources.load = m_mass_curl * forcing.source(t_theta);
    }
    if (forcing.boundary) {
      const Eigen::VectorXd b = forcing.boundary(t_theta);
      sources.load = sources.load.size() ? Eigen::VectorXd(sources.load + b) : b;
    }
    if (forcing.electric && constrained()) {
      sources.rate = (forcing.electric(previous.t + m_config.dt) - forcing.electric(previous.t)) / m_config.dt;
    }
    return sources;
  }

  Eigen::VectorXd Scheme::residual(const State & previous, const Eigen::VectorXd & z,
                                   const ForcingProvider & forcing) const
  {
    return residual(previous, z, evaluate_sources(previous, forcing));
  }

  Eigen::VectorXd Scheme::residual(const State & previous, const Eigen::VectorXd & z,
                                   const StepSources & sources) const
  {
    if (std::size_t(z.size()) != unknowns()) {
      throw InvalidArgument("residual: unknown vector has the wrong size");
    }
    const double th = m_config.theta, dt = m_config.dt;
    const Eigen::Index nE = m_curl_size;
    const auto A = z.head(nE);
    const auto E = z.segment(nE, nE);
    const Eigen::VectorXd & a0 = previous.A;
    const Eigen::VectorXd & e0 = previous.E;
    const bool bracket = m_config.variant != SchemeVariant::maxwell && !m_complex->algebra().is_abelian();

    Eigen::VectorXd R(unknowns());
    R.head(nE) = m_mass_curl * (A - a0 + dt * (th * E + (1. - th) * e0));

    // (B^{n+theta}, C v + [A^{n+1/2}, v])
    const Eigen::VectorXd Btheta = th * magnetic_field(A) + (1. - th) * magnetic_field(a0);
    const Eigen::VectorXd Y = m_mass_div * Btheta;
    Eigen::VectorXd R2 = m_mass_curl * (E - e0) - dt * (m_curl.transpose() * Y);
    if (bracket) {
      const Eigen::VectorXd Ahalf = 0.5 * (A + a0);
      R2 -= dt * (m_complex->bracket_curl_matrix(Ahalf).transpose() * Y);
    }
    if (sources.load.size()) {
      R2 -= dt * sources.load;
    }

    if (constrained()) {
      const auto lambda = z.tail(m_grad_size);
      const Eigen::VectorXd Atheta = th * A + (1. - th) * a0;
      R2 += dt * (m_mass_curl_grad * lambda);
      if (bracket) {
        R2 += dt * (m_complex->potential_bracket_matrix(Atheta) * lambda);
      }
      Eigen::VectorXd w = E - e0;
      if (sources.rate.size()) {
        w -= dt * sources.rate;
      }
      Eigen::VectorXd R3 = m_mass_curl_grad.transpose() * w;
      if (bracket) {
        const Eigen::VectorXd Aback = (1. - th) * A + th * a0;
        R3 += m_complex->potential_bracket_matrix(Aback).transpose() * w;
      }
      R.tail(m_grad_size) = R3;
    }
    R.segment(nE, nE) = R2;
    return R;
  }

  SparseMatrix Scheme::jacobian(const State & previous, const Eigen::VectorXd & z,
                                const ForcingProvider & forcing) const
  {
    return jacobian(previous, z, evaluate_sources(previous, forcing));
  }

  SparseMatrix Scheme::jacobian(const State & previous, const Eigen::VectorXd & z, const StepSources & sources) const
  {
    if (std::size_t(z.size()) != unknowns()) {
      throw InvalidArgument("jacobian: unknown vector has the wrong size");
    }
    const double th = m_config.theta, dt = m_config.dt;
    const Eigen::Index nE = m_curl_size, nV = m_grad_size;
    const Eigen::VectorXd A = z.head(nE);
    const Eigen::VectorXd E = z.segment(nE, nE);
    const Eigen::VectorXd & a0 = previous.A;
    const Eigen::VectorXd & e0 = previous.E;
    const bool bracket = m_config.variant != SchemeVariant::maxwell && !m_complex->algebra().is_abelian();

    std::vector<Triplet> triplets;
    add_block(triplets, m_mass_curl, 0, 0);
    add_block(triplets, m_mass_curl, 0, nE, dt * th);
    add_block(triplets, m_mass_curl, nE, nE);

    // d/dA of -dt (Lc + Br(A_h))^T Md B_theta
    if (bracket) {
      const Eigen::VectorXd Ahalf = 0.5 * (A + a0);
      const SparseMatrix Dhalf = m_curl + m_complex->bracket_curl_matrix(Ahalf);
      const SparseMatrix Dnew = m_curl + m_complex->bracket_curl_matrix(A);
      const Eigen::VectorXd Y = m_mass_div * (th * magnetic_field(A) + (1. - th) * magnetic_field(a0));
      const SparseMatrix JA = SparseMatrix(Dhalf.transpose()) * (m_mass_div * Dnew);
      add_block(triplets, JA, nE, 0, -dt * th);
      add_block(triplets, m_complex->bracket_curl_hessian(Y), nE, 0, -0.5 * dt);
    } else {
      const SparseMatrix JA = SparseMatrix(m_curl.transpose()) * (m_mass_div * m_curl);
      add_block(triplets, JA, nE, 0, -dt * th);
    }

    if (constrained()) {
      const Eigen::VectorXd lambda = z.tail(nV);
      const Eigen::VectorXd Atheta = th * A + (1. - th) * a0;
      const Eigen::VectorXd Aback = (1. - th) * A + th * a0;
      add_block(triplets, m_mass_curl_grad, nE, 2 * nE, dt);
      const SparseMatrix GtMc = m_mass_curl_grad.transpose();
      add_block(triplets, GtMc, 2 * nE, nE);
      if (bracket) {
        add_block(triplets, m_complex->potential_bracket_multiplier_matrix(lambda), nE, 0, dt * th);
        add_block(triplets, m_complex->potential_bracket_matrix(Atheta), nE, 2 * nE, dt);
        add_block(triplets, SparseMatrix(m_complex->potential_bracket_matrix(Aback).transpose()), 2 * nE, nE);
        // d/dA of K(A_{1-theta})^T w = -K(w)^T A_{1-theta}
        Eigen::VectorXd w = E - e0;
        if (sources.rate.size()) {
          w -= dt * sources.rate;
        }
        add_block(triplets, SparseMatrix(m_complex->potential_bracket_matrix(w).transpose()), 2 * nE, 0, -(1. - th));
      }
    }

    SparseMatrix J(unknowns(), unknowns());
    J.setFromTriplets(triplets.begin(), triplets.end());
    return J;
  }

  State Scheme::step(const State & state, const ForcingProvider & forcing, StepReport * report) const
  {
    if (std::size_t(state.A.size()) != m_curl_size || std::size_t(state.E.size()) != m_curl_size) {
      throw InvalidArgument("step: state has the wrong size");
    }
    const StepSources sources = evaluate_sources(state, forcing);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(unknowns());
    const Eigen::VectorXd R0 = residual(state, zero, sources);

    auto F = [&](const Eigen::VectorXd & z) -> Eigen::VectorXd { return residual(state, z, sources) - R0; };
    const LinearSolverMode mode = m_config.newton.linear_solver;
    auto solve_step = [&](const Eigen::VectorXd & z, const Eigen::VectorXd & rhs, double & linear_residual) {
      return solve_linear(jacobian(state, z, sources), rhs, mode, linear_residual);
    };
    NewtonResult result = newton_solve(F, NewtonStepSolver(solve_step), pack(state), m_config.newton, -R0);
    if (report) {
      report->newton = result.report;
      report->linear_residual_max = 0.;
      for (double r : result.report.linear_residuals) {
        report->linear_residual_max = std::max(report->linear_residual_max, r);
      }
    }
    return unpack(result.z, state.t + m_config.dt, state.level + 1);
  }

  DiagnosticsRow Scheme::diagnostics(const State & state, const Eigen::VectorXd & initial_constraint) const
  {
    DiagnosticsRow row;
    row.step = state.level;
    row.time = state.t;
    std::tie(row.energy_E, row.energy_B) = energy(state);
    row.constraint_drift_dual_norm =
      constraint_dual_norm(constraint_functional(state.A, state.E) - initial_constraint);
    return row;
  }

  RunResult Scheme::run(const State & initial, int steps, const ForcingProvider & forcing, bool keep_states,
                        const std::function<void(const DiagnosticsRow &)> & on_row) const
  {
    if (steps < 0) {
      throw InvalidArgument("run: negative step count");
    }
    RunResult result;
    State state = initial;
    if (constrained() && state.lambda.size() == 0) {
      state.lambda = Eigen::VectorXd::Zero(m_grad_size);
    }
    const Eigen::VectorXd c0 = constraint_functional(state.A, state.E);
    auto record = [&](const DiagnosticsRow & row) {
      result.rows.push_back(row);
      if (on_row) {
        on_row(row);
      }
    };
    record(diagnostics(state, c0));
    if (keep_states) {
      result.states.push_back(state);
    }
    const double t0 = initial.t;
    for (int n = 0; n < steps; ++n) {
      StepReport rep;
      state = step(state, forcing, &rep);
      state.t = t0 + (n + 1) * m_config.dt;
      DiagnosticsRow row = diagnostics(state, c0);
      row.newton_iters = rep.newton.iterations;
      row.newton_residual = rep.newton.relative_residual;
      row.linear_residual_max = rep.linear_residual_max;
      record(row);
      if (keep_states) {
        result.states.push_back(state);
      }
    }
    result.final_state = state;
    return result;
  }

} // namespace ymddr
