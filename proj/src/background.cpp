#include "fanno/background.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fanno/errors.hpp"

namespace fanno {

namespace {

void require_valid_mach(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("Mach number must be positive and finite");
  if (std::abs(1.0 - M * M) < kSonicGuard) throw SonicSingularityError("Mach number within the sonic guard of 1");
}

double relation(double t) { return 1.0 / t + std::log(t); }

struct EntryState {
  double p, rho, u, E, s, A;
};

EntryState entry_state(double M0, double p0, double s0, const GasModel& gas) {
  if (!(p0 > 0.0)) throw DomainError("background: anchor pressure must be positive");
  EntryState e;
  e.A = gas.entropy_function(s0);
  e.p = p0;
  e.rho = density_from(p0, e.A, gas.gamma);
  const double c = std::sqrt(gas.gamma * p0 / e.rho);
  e.u = M0 * c;
  e.E = 0.5 * e.u * e.u + c * c / (gas.gamma - 1.0);
  e.s = s0;
  return e;
}

double entry_pressure(double M0, const ThermoAnchor& anchor, double length, const GasModel& gas) {
  if (const auto* exit = std::get_if<ExitPressure>(&anchor)) {
    if (!(exit->p_exit > 0.0)) throw DomainError("background: anchor pressure must be positive");
    const double ML = mach_at(length, M0, gas);
    return exit->p_exit * std::pow(ML / M0, 2.0 * gas.gamma / (gas.gamma + 1.0));
  }
  return std::get<EntryPressure>(anchor).p_entry;
}

double entry_entropy(const ThermoAnchor& anchor) {
  return std::visit([](const auto& a) { return a.s_entry; }, anchor);
}

void check_length(double M0, double length, const GasModel& gas) {
  if (!(length > 0.0)) throw DomainError("background: duct length must be positive");
  const auto Lmax = max_length(M0, gas);
  if (Lmax && length >= *Lmax) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "background: duct length %.6g reaches the choking length L_M0 = %.10g", length, *Lmax);
    throw ChokingError(msg, *Lmax);
  }
  const double ML = mach_at(length, M0, gas);
  if (std::abs(1.0 - ML * ML) < kSonicGuard)
    throw SonicSingularityError("background: exit Mach number within the sonic guard");
}

BackgroundProfile make_shell(double M0, double length, const GasModel& gas, int n_steps, const EntryState& e) {
  if (n_steps < 1) throw DomainError("background: n_steps must be positive");
  BackgroundProfile prof;
  prof.gas = gas;
  prof.regime = M0 < 1.0 ? Regime::subsonic : Regime::supersonic;
  prof.M_entry = M0;
  prof.length = length;
  prof.mass_flux = e.rho * e.u;
  prof.A = e.A;
  const int n = n_steps + 1;
  prof.x0 = Eigen::VectorXd::LinSpaced(n, 0.0, length);
  for (auto* v : {&prof.p, &prof.rho, &prof.u, &prof.E, &prof.s, &prof.M, &prof.t, &prof.c}) v->resize(n);
  return prof;
}

void fill_derived(BackgroundProfile& prof) {
  const double g = prof.gas.gamma;
  for (Eigen::Index j = 0; j < prof.size(); ++j) {
    prof.c(j) = std::sqrt(g * prof.p(j) / prof.rho(j));
    prof.M(j) = prof.u(j) / prof.c(j);
    prof.t(j) = prof.M(j) * prof.M(j);
  }
}

}  // namespace

double mach_ode_rhs(double M, const GasModel& gas) {
  require_valid_mach(M);
  return gas.mu * (gas.gamma + 1.0) * M * M * M / (2.0 * (1.0 - M * M));
}

std::optional<double> max_length(double M0, const GasModel& gas) {
  gas.validate();
  if (!(M0 > 0.0)) throw DomainError("max_length: Mach number must be positive");
  if (gas.mu == 0.0) return std::nullopt;
  const double t0 = M0 * M0;
  return (1.0 / t0 + std::log(t0) - 1.0) / (gas.mu * (gas.gamma + 1.0));
}

double mach_at(double x, double M0, const GasModel& gas) {
  require_valid_mach(M0);
  if (!(x >= 0.0)) throw DomainError("mach_at: position must be non-negative");
  const auto Lmax = max_length(M0, gas);
  if (!Lmax || x == 0.0) return M0;
  if (x >= *Lmax) throw ChokingError("mach_at: position beyond the choking length", *Lmax);
  const double target = relation(M0 * M0) - gas.mu * (gas.gamma + 1.0) * x;
  const bool sub = M0 < 1.0;
  double lo, hi;
  if (sub) {
    lo = M0 * M0;
    hi = 1.0;
  } else {
    lo = 1.0;
    hi = M0 * M0;
  }
  // relation() is decreasing on (0,1) and increasing on (1,inf); bisect on t = M^2.
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = relation(mid) - target;
    if ((f > 0.0) == sub)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = (t - 1.0) / (t * t);
    if (d == 0.0) break;
    const double step = (relation(t) - target) / d;
    const double next = t - step;
    if (!(next > 0.0) || ((next < 1.0) != sub)) break;
    t = next;
  }
  return std::sqrt(t);
}

BackgroundProfile integrate_background(double M0, const ThermoAnchor& anchor, double length, const GasModel& gas,
                                       int n_steps) {
  gas.validate();
  require_valid_mach(M0);
  check_length(M0, length, gas);
  const EntryState e = entry_state(M0, entry_pressure(M0, anchor, length, gas), entry_entropy(anchor), gas);
  BackgroundProfile prof = make_shell(M0, length, gas, n_steps, e);

  using State = std::array<double, 5>;  // u, rho, p, E, s
  const double g = gas.gamma, mu = gas.mu;
  auto rhs = [&](const State& y) {
    const double M2 = y[0] * y[0] * y[1] / (g * y[2]);
    if (std::abs(1.0 - M2) < kSonicGuard) throw SonicSingularityError("background: integration reached the sonic guard");
    const double k = mu * M2 / (M2 - 1.0);
    return State{-y[0] * k, y[1] * k, g * y[2] * k, -mu * y[0] * y[0], 0.0};
  };
  auto axpy = [](const State& y, double a, const State& k) {
    State r;
    for (int i = 0; i < 5; ++i) r[i] = y[i] + a * k[i];
    return r;
  };
  State y{e.u, e.rho, e.p, e.E, e.s};
  const double h = length / n_steps;
  for (int j = 0; j <= n_steps; ++j) {
    prof.u(j) = y[0];
    prof.rho(j) = y[1];
    prof.p(j) = y[2];
    prof.E(j) = y[3];
    prof.s(j) = y[4];
    if (j == n_steps) break;
    const State k1 = rhs(y);
    const State k2 = rhs(axpy(y, 0.5 * h, k1));
    const State k3 = rhs(axpy(y, 0.5 * h, k2));
    const State k4 = rhs(axpy(y, h, k3));
    for (int i = 0; i < 5; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  fill_derived(prof);
  return prof;
}

BackgroundProfile closed_form_background(double M0, const ThermoAnchor& anchor, double length, const GasModel& gas,
                                         int n_steps) {
  gas.validate();
  require_valid_mach(M0);
  check_length(M0, length, gas);
  const EntryState e = entry_state(M0, entry_pressure(M0, anchor, length, gas), entry_entropy(anchor), gas);
  BackgroundProfile prof = make_shell(M0, length, gas, n_steps, e);
  for (Eigen::Index j = 0; j < prof.size(); ++j) {
    const BackgroundPoint b = background_point(prof, prof.x0(j));
    prof.p(j) = b.p;
    prof.rho(j) = b.rho;
    prof.u(j) = b.u;
    prof.E(j) = b.E;
    prof.s(j) = e.s;
  }
  fill_derived(prof);
  return prof;
}

BackgroundPoint background_point(const BackgroundProfile& profile, double x) {
  const GasModel& gas = profile.gas;
  const double g = gas.gamma;
  BackgroundPoint b;
  b.M = mach_at(x, profile.M_entry, gas);
  b.t = b.M * b.M;
  const double j = profile.mass_flux;
  b.rho = std::pow(j * j / (g * profile.A * b.t), 1.0 / (g + 1.0));
  b.u = j / b.rho;
  b.p = profile.A * std::pow(b.rho, g);
  b.c2 = g * b.p / b.rho;
  b.E = 0.5 * b.u * b.u + b.c2 / (g - 1.0);
  return b;
}

double downstream_mach(double M_minus, const GasModel& gas) {
  gas.validate();
  if (!(M_minus >= 1.0) || !std::isfinite(M_minus))
    throw DomainError("downstream_mach: upstream Mach number must be at least 1");
  const double g = gas.gamma, m2 = M_minus * M_minus;
  return std::sqrt((1.0 + 0.5 * (g - 1.0) * m2) / (g * m2 - 0.5 * (g - 1.0)));
}

namespace {

TransonicShockSolution build_shock(double M0, double L1, double L, double p0, double s0, const GasModel& gas,
                                   int n_steps) {
  TransonicShockSolution sol;
  sol.shock_pos = L1;
  sol.upstream = integrate_background(M0, EntryPressure{p0, s0}, L1, gas, n_steps);
  const BackgroundPoint minus = background_point(sol.upstream, L1);
  sol.M_minus = minus.M;
  sol.M_plus = downstream_mach(minus.M, gas);
  const double Lmax2 = max_length(sol.M_plus, gas).value_or(INFINITY);
  if (L >= L1 + Lmax2) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "shock: downstream duct chokes; L must be below L1 + L_M+ = %.10g", L1 + Lmax2);
    throw ChokingError(msg, L1 + Lmax2);
  }
  const double g = gas.gamma, m2 = minus.t;
  const double rho_plus = minus.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  const double p_plus = minus.p * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0));
  const double s_plus = gas.entropy_from(p_plus / std::pow(rho_plus, g));
  sol.downstream = integrate_background(sol.M_plus, EntryPressure{p_plus, s_plus}, L - L1, gas, n_steps);
  sol.downstream.x_begin = L1;
  sol.downstream.x0.array() += L1;
  return sol;
}

}  // namespace

TransonicShockSolution construct_transonic_shock(double M0, double L1, double L, const ThermoAnchor& anchor,
                                                 const GasModel& gas, int n_steps) {
  gas.validate();
  if (!(M0 > 1.0)) throw RegimeError("shock: entry flow must be supersonic");
  if (!(L1 > 0.0) || !(L > L1)) throw DomainError("shock: need 0 < L1 < L");
  const auto Lmax = max_length(M0, gas);
  if (Lmax && L1 >= *Lmax) throw ChokingError("shock: upstream supersonic flow chokes before the shock", *Lmax);
  const double s0 = entry_entropy(anchor);
  if (const auto* entry = std::get_if<EntryPressure>(&anchor))
    return build_shock(M0, L1, L, entry->p_entry, s0, gas, n_steps);
  const double p_exit = std::get<ExitPressure>(anchor).p_exit;
  if (!(p_exit > 0.0)) throw DomainError("shock: anchor pressure must be positive");
  // Pressure scales linearly through the Fanno and shock relations at fixed entropy.
  const TransonicShockSolution unit = build_shock(M0, L1, L, 1.0, s0, gas, n_steps);
  const double q = unit.downstream.p(unit.downstream.size() - 1);
  return build_shock(M0, L1, L, p_exit / q, s0, gas, n_steps);
}

JumpResiduals rankine_hugoniot_residuals(const TransonicShockSolution& shock) {
  const auto& a = shock.upstream;
  const auto& b = shock.downstream;
  const Eigen::Index n = a.size() - 1;
  const double ma = a.rho(n) * a.u(n), mb = b.rho(0) * b.u(0);
  const double pa = ma * a.u(n) + a.p(n), pb = mb * b.u(0) + b.p(0);
  JumpResiduals r;
  r.mass = std::abs(ma - mb) / std::abs(ma);
  r.momentum = std::abs(pa - pb) / std::abs(pa);
  r.energy = std::abs(a.E(n) - b.E(0)) / std::abs(a.E(n));
  return r;
}

std::string profile_csv(const BackgroundProfile& profile) {
  std::ostringstream out;
  out << "x0,p,rho,u,E,s,M,theta\n";
  char line[512];
  for (Eigen::Index j = 0; j < profile.size(); ++j) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", profile.x0(j), profile.p(j),
                  profile.rho(j), profile.u(j), profile.E(j), profile.s(j), profile.M(j), profile.theta(j));
    out << line;
  }
  return out.str();
}

}  // namespace fanno
