#pragma once

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "fanno/gas.hpp"

namespace fanno {

/// Refusal band around M = 1: |1 - M^2| below this is treated as sonic.
inline constexpr double kSonicGuard = 1e-6;

enum class Regime { subsonic, supersonic };

/// Pressure at the exit x^0 = L with entropy at the entry.
struct ExitPressure {
  double p_exit;
  double s_entry;
};
/// Pressure and entropy at the entry x^0 = 0.
struct EntryPressure {
  double p_entry;
  double s_entry;
};
using ThermoAnchor = std::variant<ExitPressure, EntryPressure>;

/// x^0-dependent Fanno flow sampled on a uniform grid over [x_begin, x_begin + length].
struct BackgroundProfile {
  GasModel gas;
  Regime regime = Regime::subsonic;
  double M_entry = 0.5;
  double x_begin = 0.0;
  double length = 0.0;
  double mass_flux = 0.0;   // rho u
  double A = 1.0;           // p / rho^gamma

  Eigen::VectorXd x0, p, rho, u, E, s, M, t, c;

  Eigen::Index size() const { return x0.size(); }
  double h() const { return length / static_cast<double>(x0.size() - 1); }
  double theta(Eigen::Index j) const { return p(j) / (rho(j) * gas.R); }
};

/// Background state at one position, from the closed-form Mach relation.
struct BackgroundPoint {
  double M, t, p, rho, u, E, c2;
};

/// dM/dx^0 = mu (gamma + 1) M^3 / (2 (1 - M^2)).
double mach_ode_rhs(double M, const GasModel& gas);

/// Choking length (1/M0^2 + ln M0^2 - 1) / (mu (gamma + 1)); empty when mu = 0 (no choking).
std::optional<double> max_length(double M0, const GasModel& gas);

/// Root of 1/M^2 + ln M^2 = 1/M0^2 + ln M0^2 - mu (gamma + 1) x on the side of 1 containing M0.
double mach_at(double x, double M0, const GasModel& gas);

/// Integrates the Fanno ODEs for (u, rho, p, E, s) with fixed-step RK4 from the entry.
/// An ExitPressure anchor fixes the entry pressure through the closed-form pressure ratio.
BackgroundProfile integrate_background(double M0, const ThermoAnchor& anchor, double length,
                                       const GasModel& gas, int n_steps);

/// Same flow sampled from the closed-form relations (no ODE integration).
BackgroundProfile closed_form_background(double M0, const ThermoAnchor& anchor, double length,
                                         const GasModel& gas, int n_steps);

/// Closed-form state at distance x from the profile's entry (x in [0, length]).
BackgroundPoint background_point(const BackgroundProfile& profile, double x);

/// Normal-shock Mach number behind a shock with upstream Mach M_minus >= 1.
double downstream_mach(double M_minus, const GasModel& gas);

struct TransonicShockSolution {
  double shock_pos = 0.0;
  double M_minus = 0.0;
  double M_plus = 0.0;
  BackgroundProfile upstream;
  BackgroundProfile downstream;
};

/// Supersonic flow on [0, L1], normal shock at L1, subsonic flow on [L1, L].
/// Anchors: EntryPressure fixes the upstream entry state; ExitPressure fixes p(L).
TransonicShockSolution construct_transonic_shock(double M0, double L1, double L, const ThermoAnchor& anchor,
                                                 const GasModel& gas, int n_steps);

/// Relative residuals of mass, momentum and energy across the shock.
struct JumpResiduals {
  double mass, momentum, energy;
};
JumpResiduals rankine_hugoniot_residuals(const TransonicShockSolution& shock);

/// CSV text with header x0,p,rho,u,E,s,M,theta and 17 significant digits.
std::string profile_csv(const BackgroundProfile& profile);

}  // namespace fanno
