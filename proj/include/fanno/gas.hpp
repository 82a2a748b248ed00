#pragma once

#include <array>
#include <cmath>

namespace fanno {

/// Polytropic gas with wall friction: p = A(s) rho^gamma, A(s) = k0 exp(s / c_v),
/// friction force mu (u^0)^2 per unit mass acting against the axial direction.
struct GasModel {
  double gamma = 1.4;
  double mu = 0.0;
  double c_v = 1.0;
  double k0 = 1.0;
  double R = 1.0;

  /// Throws DomainError unless gamma > 1, mu >= 0 and c_v, k0, R > 0.
  void validate() const;

  double entropy_function(double s) const { return k0 * std::exp(s / c_v); }
  double entropy_from(double A) const;
};

/// Pointwise thermodynamic and kinematic state.
struct ThermoState {
  double p = 1.0;
  double rho = 1.0;
  double u0 = 0.0;
  std::array<double, 2> u_t{0.0, 0.0};

  double speed_sq() const { return u0 * u0 + u_t[0] * u_t[0] + u_t[1] * u_t[1]; }
};

/// c^2 = gamma p / rho. Throws DomainError for non-positive p or rho.
double sound_speed_sq(const ThermoState& state, const GasModel& gas);
double mach_number(const ThermoState& state, const GasModel& gas);
/// E = |u|^2 / 2 + gamma p / ((gamma - 1) rho).
double bernoulli_constant(const ThermoState& state, const GasModel& gas);
/// theta = p / (rho R).
double temperature(const ThermoState& state, const GasModel& gas);
/// A(s) = p / rho^gamma.
double entropy_function(const ThermoState& state, const GasModel& gas);
double entropy(const ThermoState& state, const GasModel& gas);

/// rho = (p / A)^(1/gamma).
inline double density_from(double p, double A, double gamma) { return std::pow(p / A, 1.0 / gamma); }

}  // namespace fanno
