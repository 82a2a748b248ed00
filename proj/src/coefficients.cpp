#include "fanno/coefficients.hpp"

#include <cmath>

#include "fanno/errors.hpp"

namespace fanno {

double d1(double t, double g) { return -((1.0 + 2.0 * g) * t * t - t + 2.0) / (t - 1.0); }

double d2(double t, double g) {
  const double t2 = t * t, q = t - 1.0;
  return (g * (1.0 + g) * t2 * t2 - 2.0 * g * (1.0 + g) * t2 * t - (g - 3.0) * t2 - 8.0 * t + 4.0) / (q * q * q);
}

double d3(double t, double g) {
  const double q = t - 1.0;
  return 2.0 * (g * t * t + 3.0 * t - 2.0) / (q * q * q);
}

double d4(double t, double g) {
  const double q = t - 1.0;
  return -(g * (g - 1.0) * t * t * t + (5.0 * g - 3.0) * t * t - 2.0 * (g - 4.0) * t - 4.0) /
         ((g - 1.0) * q * q * q);
}

double robin_constant(double M_entry, const GasModel& gas) {
  const double m2 = M_entry * M_entry, q = m2 - 1.0;
  return -gas.mu * (gas.gamma * m2 * m2 - m2 + 2.0) / (q * q);
}

double EllipticCoefficients::sup_norm() const {
  return std::max({nodes.e1.cwiseAbs().maxCoeff(), nodes.e2.cwiseAbs().maxCoeff(), nodes.e3.cwiseAbs().maxCoeff(),
                   nodes.e4.cwiseAbs().maxCoeff()});
}

namespace {

CoefficientSamples sample(const BackgroundProfile& profile, const GasModel& gas, const Eigen::VectorXd& xs) {
  const double g = gas.gamma, mu = gas.mu;
  CoefficientSamples c;
  const Eigen::Index n = xs.size();
  for (auto* v : {&c.t, &c.e1, &c.e2, &c.e3, &c.e4, &c.e5, &c.e6, &c.b, &c.db, &c.ddb, &c.te1, &c.te2, &c.te3_base})
    v->resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = xs(j);
    const BackgroundPoint bp = background_point(profile, x);
    const double t = bp.t, rho = bp.rho;
    if (!(t > 0.0 && t < 1.0)) throw RegimeError("coefficients: background must be subsonic (0 < t < 1)");
    const double decay = std::exp(-2.0 * mu * x);
    const double dt = mu * (g + 1.0) * t * t / (1.0 - t);
    const double k = 2.0 + t / (1.0 - t);
    const double b = 1.0 / (decay * rho);
    const double db = b * mu * k;
    const double ddb = b * (mu * mu * k * k + mu * dt / ((1.0 - t) * (1.0 - t)));
    const double D3 = d3(t, g);
    c.t(j) = t;
    c.e1(j) = t - 1.0;
    c.e2(j) = mu * d1(t, g);
    c.e3(j) = mu * mu * d2(t, g);
    c.e4(j) = 2.0 * mu * mu * mu * decay * rho * D3;
    c.e5(j) = -mu * mu * std::pow(rho, g) * d4(t, g);
    c.e6(j) = -mu * mu * decay * rho * D3;
    c.b(j) = b;
    c.db(j) = db;
    c.ddb(j) = ddb;
    const double e1 = c.e1(j), e2 = c.e2(j), e3 = c.e3(j);
    c.te1(j) = e1 / b;
    c.te2(j) = e2 / b - 2.0 * e1 * db / (b * b);
    c.te3_base(j) = e3 / b - (e2 * db + e1 * ddb) / (b * b) + 2.0 * e1 * db * db / (b * b * b);
  }
  return c;
}

}  // namespace

EllipticCoefficients assemble_coefficients(const BackgroundProfile& profile, const GasModel& gas) {
  gas.validate();
  if (profile.regime != Regime::subsonic) throw RegimeError("coefficients: background must be subsonic");
  if (profile.size() < 4) throw ShapeError("coefficients: need at least four axial samples");
  EllipticCoefficients c;
  c.mu = gas.mu;
  c.gamma = gas.gamma;
  c.length = profile.length;
  c.gamma0 = robin_constant(profile.M_entry, gas);
  c.x0 = profile.x0.array() - profile.x_begin;
  c.nodes = sample(profile, gas, c.x0);
  const Eigen::Index n = c.x0.size();
  Eigen::VectorXd xm(n - 1);
  for (Eigen::Index j = 0; j + 1 < n; ++j) xm(j) = 0.5 * (c.x0(j) + c.x0(j + 1));
  c.mid = sample(profile, gas, xm);
  c.d1 = c.nodes.t.unaryExpr([&](double t) { return d1(t, gas.gamma); });
  c.d2 = c.nodes.t.unaryExpr([&](double t) { return d2(t, gas.gamma); });
  c.d3 = c.nodes.t.unaryExpr([&](double t) { return d3(t, gas.gamma); });
  c.d4 = c.nodes.t.unaryExpr([&](double t) { return d4(t, gas.gamma); });
  return c;
}

}  // namespace fanno
