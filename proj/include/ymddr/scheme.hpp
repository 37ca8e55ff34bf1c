// Time stepping for the Maxwell and Yang-Mills systems on the LADDR complex.
//
// Unknown vectors are packed as z = (A, E) or z = (A, E, lambda) for the constrained
// variant. Equation rows follow the same order.

#ifndef YMDDR_SCHEME_HPP
#define YMDDR_SCHEME_HPP

#include <ymddr/laddr.hpp>
#include <ymddr/solver.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ymddr
{

  enum class SchemeVariant
  {
    maxwell,
    ym_unconstrained,
    ym_constrained
  };

  /// "maxwell", "ym" or "ym-constrained"
  SchemeVariant parse_scheme_variant(const std::string & name);
  std::string to_string(SchemeVariant variant);

  struct State
  {
    Eigen::VectorXd A;
    Eigen::VectorXd E;
    Eigen::VectorXd lambda; ///< empty unless the variant is constrained
    double t = 0.;
    int level = 0;
  };

  struct SchemeConfig
  {
    SchemeVariant variant = SchemeVariant::ym_constrained;
    double theta = 1.;
    double dt = 0.1;
    NewtonConfig newton;
    bool manufactured = false;
  };

  /// Newton settings suited to a variant: LU for the nonsingular Maxwell and unconstrained
  /// systems, least squares for the constrained one
  NewtonConfig default_newton_config(SchemeVariant variant);

  /// Time-dependent data entering the discrete equations. Each member may be empty.
  struct ForcingProvider
  {
    /// I_curl F(t)
    std::function<Eigen::VectorXd(double)> source;
    /// Boundary functional v -> int_{dOmega} < n x B(t), gamma_t v >, as a vector over curl dofs
    std::function<Eigen::VectorXd(double)> boundary;
    /// I_curl E(t), used for the rate term of the constraint equation
    std::function<Eigen::VectorXd(double)> electric;

    bool empty() const { return !source && !boundary && !electric; }
  };

  struct StepReport
  {
    NewtonReport newton;
    double linear_residual_max = 0.;
  };

  struct DiagnosticsRow
  {
    int step = 0;
    double time = 0.;
    double energy_E = 0.;
    double energy_B = 0.;
    int newton_iters = 0;
    double newton_residual = 0.;
    double constraint_drift_dual_norm = 0.;
    double linear_residual_max = 0.;
  };

  void write_diagnostics_header(std::ostream & out);
  void write_diagnostics_row(std::ostream & out, const DiagnosticsRow & row);

  struct RunResult
  {
    std::vector<State> states; ///< filled only when requested
    State final_state;
    std::vector<DiagnosticsRow> rows;
  };

  class Scheme
  {
  public:
    /// The complex must outlive the scheme
    Scheme(const LADDRComplex & complex, SchemeConfig config);

    const LADDRComplex & complex() const { return *m_complex; }
    const SchemeConfig & config() const { return m_config; }
    bool constrained() const { return m_config.variant == SchemeVariant::ym_constrained; }

    std::size_t curl_size() const { return m_curl_size; }
    std::size_t grad_size() const { return m_grad_size; }
    std::size_t unknowns() const;

    /// Lifted curl A + 1/2 [A, A] (no bracket for the Maxwell variant)
    Eigen::VectorXd magnetic_field(const Eigen::VectorXd & A) const;
    /// Entries (E, G q_i) + int < P E, [P A, P q_i] > over the basis q_i of the grad space
    Eigen::VectorXd constraint_functional(const Eigen::VectorXd & A, const Eigen::VectorXd & E) const;
    /// sqrt(c^T M^{-1} c) with M the lifted grad Gram matrix
    double constraint_dual_norm(const Eigen::VectorXd & c) const;
    /// (1/2 |E|^2, 1/2 |B|^2) in the discrete norms
    std::pair<double, double> energy(const State & state) const;

    State interpolate_ics(const LieVectorField & A0, const LieVectorField & E0) const;
    /// Interpolated A; (E, lambda) from the constrained projection of E0
    State project_ics(const LieVectorField & A0, const LieVectorField & E0,
                      LeastSquaresReport * report = nullptr) const;
    /// Constrained projection of an already interpolated state
    State project_state(const State & state, LeastSquaresReport * report = nullptr) const;

    /// Residual of the step equations from `previous`, with forcing terms evaluated at its time
    Eigen::VectorXd residual(const State & previous, const Eigen::VectorXd & z,
                             const ForcingProvider & forcing = {}) const;
    SparseMatrix jacobian(const State & previous, const Eigen::VectorXd & z, const ForcingProvider & forcing = {}) const;

    Eigen::VectorXd pack(const State & state) const;
    State unpack(const Eigen::VectorXd & z, double t, int level) const;

    State step(const State & state, const ForcingProvider & forcing = {}, StepReport * report = nullptr) const;

    DiagnosticsRow diagnostics(const State & state, const Eigen::VectorXd & initial_constraint) const;

    RunResult run(const State & initial, int steps, const ForcingProvider & forcing = {},
                  bool keep_states = false,
                  const std::function<void(const DiagnosticsRow &)> & on_row = {}) const;

  private:
    struct StepSources
    {
      Eigen::VectorXd load; // added to the right-hand side of the E equation, already scaled by the Gram
      Eigen::VectorXd rate; // exact rate of E for the constraint equation
    };
    StepSources evaluate_sources(const State & previous, const ForcingProvider & forcing) const;
    Eigen::VectorXd residual(const State & previous, const Eigen::VectorXd & z, const StepSources & sources) const;
    SparseMatrix jacobian(const State & previous, const Eigen::VectorXd & z, const StepSources & sources) const;

    const LADDRComplex * m_complex;
    SchemeConfig m_config;
    std::size_t m_curl_size;
    std::size_t m_grad_size;
    SparseMatrix m_mass_curl;     // Mc
    SparseMatrix m_mass_div;      // Md
    SparseMatrix m_grad;          // G
    SparseMatrix m_curl;          // Lc
    SparseMatrix m_mass_curl_grad; // Mc G
    SpdSolver m_grad_gram_solver;
  };

  /// max{10, ceil(5 / h)}
  int auto_step_count(double h);

} // namespace ymddr

#endif
