#include <doctest.h>

#include <ymddr/errors.hpp>
#include <ymddr/manufactured.hpp>
#include <ymddr/scheme.hpp>

#include "support.hpp"

#include <random>
#include <sstream>

using namespace ymddr;

namespace
{
  struct Setup
  {
    explicit Setup(std::size_t n, LieAlgebra g = su2()) : mesh(build_cubic_mesh(n)), ddr(mesh), la(ddr, std::move(g)) {}
    Mesh mesh;
    DDRComplex ddr;
    LADDRComplex la;
  };

  SchemeConfig make_config(SchemeVariant variant, double theta, double dt = 0.1, double tol = 1e-12)
  {
    SchemeConfig cfg;
    cfg.variant = variant;
    cfg.theta = theta;
    cfg.dt = dt;
    cfg.newton = default_newton_config(variant);
    cfg.newton.tolerance = tol;
    return cfg;
  }

  State random_state(const Scheme & s, std::mt19937_64 & rng, double scale = 1.)
  {
    State st;
    st.A = scale * testing::random_vector(rng, Eigen::Index(s.curl_size()));
    st.E = scale * testing::random_vector(rng, Eigen::Index(s.curl_size()));
    if (s.constrained()) {
      st.lambda = scale * testing::random_vector(rng, Eigen::Index(s.grad_size()));
    }
    return st;
  }

  State gauge_state(const Scheme & s)
  {
    const ManufacturedSolution ms(su2());
    return s.interpolate_ics(ms.potential_field(0.), ms.electric_field(0.));
  }

  double total_energy(const Scheme & s, const State & st)
  {
    const auto [e, b] = s.energy(st);
    return e + b;
  }

  const SchemeVariant all_variants[] = {SchemeVariant::maxwell, SchemeVariant::ym_unconstrained,
                                        SchemeVariant::ym_constrained};
} // namespace

TEST_CASE("scheme names and defaults")
{
  for (SchemeVariant v : all_variants) {
    CHECK(parse_scheme_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_scheme_variant("yang-mills"), InvalidArgument);
  CHECK(default_newton_config(SchemeVariant::ym_constrained).linear_solver == LinearSolverMode::least_squares);
  CHECK(default_newton_config(SchemeVariant::maxwell).linear_solver == LinearSolverMode::direct);
  CHECK(default_newton_config(SchemeVariant::ym_unconstrained).tolerance == 1e-6);
  CHECK(default_newton_config(SchemeVariant::ym_unconstrained).max_iterations == 50);
}

TEST_CASE("automatic step count")
{
  CHECK(auto_step_count(std::sqrt(3.) / 2.) == 10);
  CHECK(auto_step_count(std::sqrt(3.) / 4.) == 12);
  CHECK(auto_step_count(std::sqrt(3.) / 8.) == 24);
  CHECK(auto_step_count(0.5) == 10);
  CHECK(auto_step_count(0.25) == 20);
  CHECK_THROWS_AS(auto_step_count(0.), InvalidArgument);
}

TEST_CASE("invalid configurations")
{
  Setup s(1);
  CHECK_THROWS_AS(Scheme(s.la, make_config(SchemeVariant::maxwell, 0.4)), InvalidArgument);
  CHECK_THROWS_AS(Scheme(s.la, make_config(SchemeVariant::maxwell, 1., 0.)), InvalidArgument);
  CHECK_THROWS_AS(Scheme(s.la, make_config(SchemeVariant::maxwell, 1., 0.1, 0.)), InvalidArgument);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  CHECK_THROWS_AS(scheme.unpack(Eigen::VectorXd::Zero(3), 0., 0), InvalidArgument);
  CHECK_THROWS_AS(scheme.magnetic_field(Eigen::VectorXd::Zero(3)), InvalidArgument);
  CHECK_THROWS_AS(scheme.constraint_dual_norm(Eigen::VectorXd::Zero(3)), InvalidArgument);
  State bad;
  bad.A = Eigen::VectorXd::Zero(2);
  bad.E = bad.A;
  CHECK_THROWS_AS(scheme.step(bad), InvalidArgument);
}

TEST_CASE("pack and unpack")
{
  Setup s(1);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  std::mt19937_64 rng(1);
  const State st = random_state(scheme, rng);
  CHECK(scheme.unknowns() == 2 * scheme.curl_size() + scheme.grad_size());
  const State back = scheme.unpack(scheme.pack(st), 0.3, 4);
  CHECK(back.A == st.A);
  CHECK(back.E == st.E);
  CHECK(back.lambda == st.lambda);
  CHECK(back.t == 0.3);
  CHECK(back.level == 4);
  const Scheme maxwell(s.la, make_config(SchemeVariant::maxwell, 1.));
  CHECK(maxwell.unknowns() == 2 * maxwell.curl_size());
}

TEST_CASE("zero state is a fixed point")
{
  Setup s(2);
  for (SchemeVariant v : all_variants) {
    for (double theta : {0.5, 1.}) {
      const Scheme scheme(s.la, make_config(v, theta));
      State zero;
      zero.A = Eigen::VectorXd::Zero(Eigen::Index(scheme.curl_size()));
      zero.E = zero.A;
      const State next = scheme.step(zero);
      CHECK(next.A.norm() == 0.);
      CHECK(next.E.norm() == 0.);
      CHECK(next.t == doctest::Approx(0.1));
      CHECK(next.level == 1);
    }
  }
}

TEST_CASE("energies")
{
  Setup s(2);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_unconstrained, 1.));
  State st;
  st.A = Eigen::VectorXd::Zero(Eigen::Index(scheme.curl_size()));
  st.E = st.A;
  CHECK(scheme.energy(st).first == 0.);
  CHECK(scheme.energy(st).second == 0.);
  const Vector3 c(1., -2., 0.5);
  st.E = la_interpolate_curl(s.mesh, 3, [&](const Vector3 &) {
    Matrix3X m = Matrix3X::Zero(3, 3);
    m.col(0) = c;
    return m;
  });
  CHECK(scheme.energy(st).first == doctest::Approx(0.5 * c.squaredNorm()).epsilon(1e-12));
  CHECK(scheme.energy(st).second == 0.);
  std::mt19937_64 rng(2);
  const State r = random_state(scheme, rng);
  CHECK(scheme.energy(r).first > 0.);
  CHECK(scheme.energy(r).second > 0.);
}

TEST_CASE("magnetic field includes the bracket except for Maxwell")
{
  Setup s(1);
  std::mt19937_64 rng(3);
  const Scheme ym(s.la, make_config(SchemeVariant::ym_unconstrained, 1.));
  const Scheme mx(s.la, make_config(SchemeVariant::maxwell, 1.));
  const Eigen::VectorXd A = testing::random_vector(rng, Eigen::Index(ym.curl_size()));
  CHECK((mx.magnetic_field(A) - s.la.curl() * A).norm() == 0.);
  CHECK((ym.magnetic_field(A) - s.la.curl() * A - 0.5 * s.la.bracket_curl_curl(A, A)).norm() <= 1e-14);
}

TEST_CASE("constraint dual norm")
{
  Setup s(2);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  const SparseMatrix M = s.la.gram(Space::grad);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXd y = testing::random_vector(rng, Eigen::Index(scheme.grad_size()));
    CHECK(scheme.constraint_dual_norm(M * y) == doctest::Approx(std::sqrt(y.dot(M * y))).epsilon(1e-10));
    const Eigen::VectorXd c = testing::random_vector(rng, Eigen::Index(scheme.grad_size()));
    const double dense = std::sqrt(c.dot(Eigen::MatrixXd(M).llt().solve(c)));
    CHECK(scheme.constraint_dual_norm(c) == doctest::Approx(dense).epsilon(1e-10));
  }
  CHECK(scheme.constraint_dual_norm(Eigen::VectorXd::Zero(Eigen::Index(scheme.grad_size()))) == 0.);
}

TEST_CASE("Jacobians match finite differences")
{
  Setup s(2);
  std::mt19937_64 rng(5);
  const ManufacturedSolution ms(su2());
  for (SchemeVariant v : all_variants) {
    for (double theta : {0.5, 1.}) {
      const Scheme scheme(s.la, make_config(v, theta));
      const ForcingProvider forcing = manufactured_forcing(s.la, ms);
      State prev = random_state(scheme, rng, 0.5);
      prev.t = 0.2;
      const Eigen::VectorXd z = scheme.pack(random_state(scheme, rng, 0.5));
      const double defect = jacobian_fd_check(
        [&](const Eigen::VectorXd & x) { return scheme.residual(prev, x, forcing); },
        [&](const Eigen::VectorXd & x) { return scheme.jacobian(prev, x, forcing); }, z, 1e-5, 3, 9);
      CHECK(defect <= 1e-6);
    }
  }
}

TEST_CASE("Maxwell preserves the weak divergence")
{
  Setup s(2);
  std::mt19937_64 rng(6);
  for (double theta : {0.5, 1.}) {
    const Scheme scheme(s.la, make_config(SchemeVariant::maxwell, theta));
    const State initial = random_state(scheme, rng);
    const RunResult run = scheme.run(initial, 5, {}, true);
    const Eigen::VectorXd c0 = scheme.constraint_functional(initial.A, initial.E);
    for (const State & st : run.states) {
      const Eigen::VectorXd c = scheme.constraint_functional(st.A, st.E);
      CHECK((c - c0).cwiseAbs().maxCoeff() <= 1e-12 * c0.cwiseAbs().maxCoeff());
    }
    CHECK(run.rows.size() == 6);
    CHECK(run.rows.back().newton_iters == 1);
  }
}

TEST_CASE("constrained scheme preserves the discrete constraint")
{
  Setup s(2);
  std::mt19937_64 rng(7);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  State initial = random_state(scheme, rng);
  initial.lambda.setZero();
  StepReport rep;
  const State next = scheme.step(initial, {}, &rep);
  const Eigen::VectorXd c0 = scheme.constraint_functional(initial.A, initial.E);
  const Eigen::VectorXd c1 = scheme.constraint_functional(next.A, next.E);
  CHECK((c1 - c0).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(rep.newton.converged);
  CHECK(rep.linear_residual_max <= 1e-9);
}

TEST_CASE("unconstrained scheme conserves energy for theta = 1/2")
{
  Setup s(2);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_unconstrained, 0.5));
  const RunResult run = scheme.run(gauge_state(scheme), 10);
  const double e0 = run.rows.front().energy_E + run.rows.front().energy_B;
  for (const DiagnosticsRow & row : run.rows) {
    CHECK(std::abs(row.energy_E + row.energy_B - e0) <= 1e-8 * e0);
  }
}

TEST_CASE("energy decays for theta = 1")
{
  Setup s(2);
  for (SchemeVariant v : {SchemeVariant::ym_unconstrained, SchemeVariant::ym_constrained}) {
    const Scheme scheme(s.la, make_config(v, 1.));
    const State initial = scheme.project_state(gauge_state(scheme));
    const RunResult run = scheme.run(initial, 10, {}, true);
    for (std::size_t n = 1; n < run.states.size(); ++n) {
      CHECK(total_energy(scheme, run.states[n]) <= total_energy(scheme, run.states[n - 1]) + 1e-10);
    }
  }
}

TEST_CASE("constrained initial conditions")
{
  Setup s(2);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  const State interpolated = gauge_state(scheme);
  LeastSquaresReport rep;
  const State projected = scheme.project_state(interpolated, &rep);
  CHECK(rep.relative_residual <= 1e-9);
  CHECK(projected.A == interpolated.A);
  const Eigen::VectorXd c = scheme.constraint_functional(projected.A, projected.E);
  // the constraint is the second block of the least-squares residual
  const double rhs = (s.la.gram(Space::curl) * interpolated.E).norm();
  CHECK(c.norm() <= 1.01 * rep.relative_residual * rhs);
  CHECK(c.norm() <= 1e-9 * rhs);
  CHECK(scheme.constraint_functional(interpolated.A, interpolated.E).cwiseAbs().maxCoeff() > 1e-3);

  const LieVectorField zero = [](const Vector3 &) { return Matrix3X(Matrix3X::Zero(3, 3)); };
  const State z = scheme.project_ics(zero, zero);
  CHECK(z.E.norm() == 0.);
  const State constant = scheme.interpolate_ics(zero, [](const Vector3 &) { return Matrix3X(Matrix3X::Ones(3, 3)); });
  for (std::size_t t = 0; t < s.mesh.n_cells(); ++t) {
    CHECK((s.la.cell_potential_curl(t, constant.E) - Matrix3X::Ones(3, 3)).norm() <= 1e-12);
  }
}

TEST_CASE("constraint drift is recorded against the initial constraint")
{
  Setup s(2);
  const Scheme scheme(s.la, make_config(SchemeVariant::ym_constrained, 1.));
  const RunResult run = scheme.run(gauge_state(scheme), 3);
  REQUIRE(run.rows.size() == 4);
  CHECK(run.rows.front().constraint_drift_dual_norm == 0.);
  for (const DiagnosticsRow & row : run.rows) {
    CHECK(row.constraint_drift_dual_norm <= 1e-9);
  }
  CHECK(run.final_state.level == 3);
  CHECK(run.final_state.t == doctest::Approx(0.3));
}

TEST_CASE("diagnostics CSV")
{
  std::ostringstream out;
  write_diagnostics_header(out);
  DiagnosticsRow row;
  row.step = 2;
  row.time = 0.25;
  row.energy_E = 1.5;
  write_diagnostics_row(out, row);
  CHECK(out.str() ==
        "step,time,energy_E,energy_B,newton_iters,newton_residual,constraint_drift_dual_norm,linear_residual_max\n"
        "2,0.25,1.5,0,0,0,0,0\n");
}
