#pragma once

#include <Eigen/Dense>

#include "fanno/background.hpp"

namespace fanno {

// Coefficients of the linearized pressure operator
//   (t-1) p'' - Lap' p + mu d1 p' + mu^2 d2 p + mu^2 rho_b d3 E + mu^2 rho_b^gamma d4 A,
// as functions of t = M_b^2. They are the exact first variation of the pressure equation.
double d1(double t, double gamma);
double d2(double t, double gamma);
double d3(double t, double gamma);
double d4(double t, double gamma);

/// Robin constant -mu (gamma M^4 - M^2 + 2) / (M^2 - 1)^2 at the entry Mach number.
double robin_constant(double M_entry, const GasModel& gas);

/// Coefficient functions of the nonlocal operator
///   e1 p'' - Lap' p + e2 p' + e3 p + e4 int_0^x b p
/// and of its third-order reduction in P = int_0^x b p, sampled at the profile nodes.
struct CoefficientSamples {
  Eigen::VectorXd t, e1, e2, e3, e4, e5, e6, b, db, ddb, te1, te2, te3_base;
  /// te3 for |m|^2 = k2: te3_base + k2 / b.
  Eigen::VectorXd tilde_e3(double k2) const { return te3_base + k2 * b.cwiseInverse(); }
  Eigen::Index size() const { return t.size(); }
};

struct EllipticCoefficients {
  double mu = 0.0;
  double gamma = 1.4;
  double gamma0 = 0.0;
  double length = 0.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd d1, d2, d3, d4;
  CoefficientSamples nodes;
  /// Same quantities at the cell midpoints x_j + h/2 (used by the RK4 mode integrator).
  CoefficientSamples mid;

  double h() const { return length / static_cast<double>(x0.size() - 1); }
  /// max |e1..e4| over the nodes, the scale entering the resonance threshold.
  double sup_norm() const;
};

/// Evaluates everything in closed form; b', b'' come from differentiating
/// e^{2 mu x} / rho_b analytically via the Fanno density equation.
EllipticCoefficients assemble_coefficients(const BackgroundProfile& profile, const GasModel& gas);

}  // namespace fanno
