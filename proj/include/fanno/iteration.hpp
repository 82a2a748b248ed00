#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fanno/background.hpp"
#include "fanno/coefficients.hpp"
#include "fanno/euler_residual.hpp"
#include "fanno/fourier.hpp"
#include "fanno/grid.hpp"
#include "fanno/transport.hpp"

namespace fanno {

/// Deviations (p, E, A(s), u^1, u^2) - U_b on the duct grid.
struct PerturbationState {
  Field p, E, A, u1, u2;

  static PerturbationState zeros(int n_points, int n0);
  bool is_zero() const;
  PerturbationState operator-(const PerturbationState& other) const;
  PerturbationState scaled(double a) const;
};

/// Boundary data as deviations from the background traces:
/// E0 - E_b(0), A(s0) - A(s_b) and u'_0 on Sigma_0, p1 - p_b(L) on Sigma_1.
struct BoundaryData {
  Eigen::VectorXd E0, A0, u1, u2, p1;

  static BoundaryData zeros(int n_points);
  bool is_zero() const;
  /// ||E0||_2 + ||A0||_2 + ||u1||_2 + ||u2||_2 + ||p1||_3 (discrete, Hoelder part omitted).
  double smallness(const TangentialBasis& basis) const;
};

struct IterationConfig {
  double eps = 0.0;
  double K = 1.0;
  int max_iters = 50;
  /// Non-positive selects 1e-10 max(1, eps).
  double tol_update = 0.0;
  int contraction_window = 3;
  double threshold_factor = 1e-8;

  double tolerance() const;
  void validate() const;
};

/// Background, coefficient tables and bases shared by every stage.
struct DuctProblem {
  GasModel gas;
  DuctSpec spec;
  BackgroundProfile profile;
  EllipticCoefficients coeffs;
  TangentialBasis basis;
  /// Analytic p_b', p_b'' at the axial nodes.
  Eigen::VectorXd dp_b, ddp_b;
  /// The background reconstructed through the same formulas as perturbed states.
  FlowFields base;
};

/// Builds the closed-form subsonic background on the duct's axial grid.
DuctProblem make_problem(const GasModel& gas, double M0, const ThermoAnchor& anchor, const DuctSpec& spec);

/// rho = (p/A)^{1/gamma}, c^2 = gamma p / rho, u^0 = +sqrt(2E - |u'|^2 - 2c^2/(gamma-1)).
/// Throws DomainError when p, rho or (u^0)^2 is not positive.
FlowFields reconstruct(const PerturbationState& state, const DuctProblem& problem);

/// ||p||_k + ||A||_{k-1} + ||E||_{k-1} + sum ||u^beta||_{k-1}.
double discrete_norm(const PerturbationState& state, int k, const TangentialBasis& basis, double h);

/// mu |u'|^2 + 2 mu/(gamma-1) [(c^2 - c_b^2) - (gamma-1) p/rho_b - rho_b^{gamma-1} A].
Field assemble_H(const PerturbationState& state, const DuctProblem& problem);

/// Pieces of the pressure right-hand side.
struct PressureTerms {
  Field F1, F2, F3, F4, F5;
};
PressureTerms assemble_pressure_terms(const PerturbationState& state, const DuctProblem& problem);

/// F = F5 + F6 with F6 from the characteristics of the state's velocity.
Field assemble_F(const PerturbationState& state, const DuctProblem& problem, const CharacteristicMap& map);

/// e5 A + e6 (E0(xbar) + int_0^{x^0} 2 mu/(gamma-1) e^{2 mu tau} rho_b^{gamma-1} A o phi dtau).
Field assemble_F0(const Field& A_hat, const Eigen::VectorXd& E0_hat, const DuctProblem& problem,
                  const CharacteristicMap& map);

struct RobinTerms {
  Eigen::VectorXd G1, G2, G3;
  Eigen::VectorXd total() const { return G1 + G2 + G3; }
};
/// G at the entry: pressure from the state's trace, E, A(s) and u' from the boundary data.
RobinTerms assemble_G(const PerturbationState& state, const BoundaryData& boundary, const DuctProblem& problem);
/// -rho u^0 div' u' / ((u^0)^2/c^2 - 1) at a given (frozen) state.
Eigen::VectorXd robin_G1(const Eigen::VectorXd& rho, const Eigen::VectorXd& u0, const Eigen::VectorXd& c2,
                         const Eigen::VectorXd& div_u);

/// One application of the mapping: A(s), then p (consuming the new A), then E, then u'.
/// Failures are rethrown as StageError naming the stage.
PerturbationState apply_T(const PerturbationState& state, const BoundaryData& boundary, const DuctProblem& problem,
                          const IterationConfig& config);

/// Euler residuals of the reconstructed state minus those of the reconstructed background,
/// which removes the background's own discretization error.
EulerResidual perturbation_residual(const PerturbationState& state, const DuctProblem& problem);

struct ContractionReport {
  int iters = 0;
  std::vector<double> update_norms;
  std::vector<double> ratio_estimates;
  bool converged = false;
  EulerResidualNorms final_residuals;
};
std::string to_json(const ContractionReport& report);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, ContractionReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const ContractionReport& report() const noexcept { return report_; }

 private:
  ContractionReport report_;
};

struct FixedPointResult {
  PerturbationState state;
  ContractionReport report;
};

/// Picard iteration of apply_T from the zero state until the k = 2 norm of the update drops
/// below the tolerance. Throws DivergenceError when the ratio stays >= 1 over the window.
FixedPointResult solve_fixed_point(const BoundaryData& boundary, const DuctProblem& problem,
                                   const IterationConfig& config);

}  // namespace fanno
