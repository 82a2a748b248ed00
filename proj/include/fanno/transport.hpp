#pragma once

#include <utility>

#include <Eigen/Dense>

#include "fanno/background.hpp"
#include "fanno/fourier.hpp"

namespace fanno {

/// Flow map of the cross-sectional field u'/u^0, sampled on the duct grid.
/// Positions are stored unreduced (they may leave [0, 2 pi)); all consumers are periodic.
struct CharacteristicMap {
  double h = 0.0;
  bool identity = false;
  /// phi(x^0_j, xbar_i) for trajectories seeded at the tangential grid nodes xbar_i.
  Eigen::MatrixXd fwd1, fwd2;
  /// (phi_{x^0_j})^{-1}(x'_i) at the tangential grid nodes x'_i.
  Eigen::MatrixXd inv1, inv2;

  double min_u0 = 0.0;
  /// sup |u'| over the grid.
  double velocity_sup = 0.0;
  /// Largest |u'/u^0| met by the integrator; bounds the exact discrete displacement.
  double traced_speed_sup = 0.0;
  /// max |(phi_{x^0})^{-1} x' - x'| over the grid.
  double max_displacement = 0.0;
  /// L / min u^0.
  double displacement_constant = 0.0;
  /// Largest |phi o phi^{-1} x' - x'| after the inverse solve.
  double inverse_residual = 0.0;

  int n0() const { return static_cast<int>(fwd1.cols()); }
  double displacement_bound() const { return displacement_constant * velocity_sup; }
};

/// Map for u' = 0 (straight characteristics).
CharacteristicMap identity_map(const TangentialBasis& basis, int n0, double h);

/// Traces dx'/dx^0 = u'/u^0 from every tangential node by RK4 on the axial grid, with u'/u^0
/// evaluated by trigonometric interpolation at the mode cut, then inverts each slice.
/// Throws DomainError when u^0 <= delta somewhere or the displacement bound fails.
CharacteristicMap trace_characteristics(const Field& u0, const Field& u1, const Field& u2,
                                        const TangentialBasis& basis, double h, double delta = 0.0);

/// f(x^0_j, phi(x^0_j, xbar_i)) for every seed i (interpolated at the mode cut).
Field sample_along(const Field& f, const CharacteristicMap& map, const TangentialBasis& basis);
/// Converts values indexed by seed, g(x^0_j, xbar_i), into grid values g(x^0_j, phi^{-1}_{x^0_j} x'_i).
Field pull_back(const Field& by_seed, const CharacteristicMap& map, const TangentialBasis& basis);
/// int_0^{x^0_j} f(tau, phi_tau(xbar_i)) dtau, indexed by seed (cumulative Simpson).
Field integrate_along(const Field& f_by_seed, double h);

/// Solves D_u A = 0 with A = boundary on Sigma_0.
Field solve_entropy(const Eigen::VectorXd& boundary, const CharacteristicMap& map, const TangentialBasis& basis);

/// Bernoulli deviation with friction damping:
///   E(x^0, phi) = e^{-2 mu x^0} E0(xbar) + int_0^{x^0} e^{2 mu (tau - x^0)} S(tau, phi_tau) dtau,
///   S = 2 mu/(gamma-1) rho_b^{gamma-1} A + 2 mu/rho_b p + H.
Field solve_bernoulli(const Eigen::VectorXd& E0_hat, const Field& A_hat, const Field& p_hat, const Field& H,
                      const BackgroundProfile& profile, const CharacteristicMap& map,
                      const TangentialBasis& basis);

/// Tangential velocity: u^beta(x^0, phi) = u^beta_0(xbar) - int_0^{x^0} (d_beta p / (rho u^0))(tau, phi_tau) dtau.
std::pair<Field, Field> solve_tangential_velocity(const Field& rho, const Field& u0, const Field& p,
                                                  const Eigen::VectorXd& u1_entry, const Eigen::VectorXd& u2_entry,
                                                  const CharacteristicMap& map, const TangentialBasis& basis);

/// -mu^2 rho_b d3 e^{-2 mu x^0} int_0^{x^0} e^{2 mu tau} (2 mu/rho_b (p o phi - p(tau, x')) + H o phi) dtau.
Field solve_f6_correction(const Field& p_hat, const Field& H, const BackgroundProfile& profile,
                          const CharacteristicMap& map, const TangentialBasis& basis);

}  // namespace fanno
