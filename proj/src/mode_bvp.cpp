#include "fanno/mode_bvp.hpp"

#include <cmath>
#include <string>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"

namespace fanno {

double resonance_threshold(const EllipticCoefficients& coeffs, double factor) {
  const Eigen::Index n = coeffs.nodes.size();
  return factor * coeffs.nodes.b(n - 1) * std::max(1.0, coeffs.sup_norm());
}

ModeOperator::ModeOperator(const EllipticCoefficients& coeffs, double k2) : c_(&coeffs), k2_(k2) {
  auto build = [k2](const CoefficientSamples& s) {
    std::vector<Row> rows(s.size());
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double inv = 1.0 / s.te1(j);
      const double te3 = s.te3_base(j) + k2 / s.b(j);
      rows[j] = Row{-s.e4(j) * inv, -te3 * inv, -s.te2(j) * inv, inv};
    }
    return rows;
  };
  node_ = build(coeffs.nodes);
  mid_ = build(coeffs.mid);
}

Eigen::Vector3d ModeOperator::step(const Eigen::Vector3d& y, int j, double hj, double hm, double hj1) const {
  const double h = c_->h();
  auto f = [](const Row& r, const Eigen::Vector3d& v, double src) {
    return Eigen::Vector3d(v(1), v(2), r.a0 * v(0) + r.a1 * v(1) + r.a2 * v(2) + r.q * src);
  };
  const Eigen::Vector3d k1 = f(node_[j], y, hj);
  const Eigen::Vector3d k2 = f(mid_[j], y + 0.5 * h * k1, hm);
  const Eigen::Vector3d k3 = f(mid_[j], y + 0.5 * h * k2, hm);
  const Eigen::Vector3d k4 = f(node_[j + 1], y + h * k3, hj1);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {
Eigen::Vector3d homogeneous_start(const EllipticCoefficients& c) {
  const double b0 = c.nodes.b(0), db0 = c.nodes.db(0);
  return Eigen::Vector3d(0.0, b0, db0 - c.gamma0 * b0);
}
}  // namespace

LogValue ModeOperator::vartheta() const {
  const int n = static_cast<int>(c_->x0.size());
  Eigen::Vector3d w = homogeneous_start(*c_);
  double log_scale = std::log(w.norm());
  w.normalize();
  for (int j = 0; j + 1 < n; ++j) {
    w = step(w, j, 0.0, 0.0, 0.0);
    const double r = w.norm();
    if (!std::isfinite(r) || r == 0.0) return LogValue{NAN, 0};
    log_scale += std::log(r);
    w /= r;
  }
  if (!std::isfinite(w(1))) return LogValue{NAN, 0};
  if (w(1) == 0.0) return LogValue{-INFINITY, 0};
  return LogValue{log_scale + std::log(std::abs(w(1))), w(1) > 0.0 ? 1 : -1};
}

ModeSolution ModeOperator::solve(const Eigen::VectorXd& rhs, double robin_value, double dirichlet_value,
                                 double threshold, int parity, int m1, int m2) const {
  const int n = static_cast<int>(c_->x0.size());
  if (rhs.size() != n) throw ShapeError("mode solve: rhs sample count does not match the coefficient grid");
  Eigen::VectorXd rhs_mid(n - 1);
  {
    const Eigen::MatrixXd row = rhs.transpose();
    for (int j = 0; j + 1 < n; ++j) rhs_mid(j) = axial_midpoint(row, j)(0);
  }

  std::vector<Eigen::Vector3d> W(n), V(n);
  Eigen::VectorXd r(n), s(n);
  Eigen::Vector3d w = homogeneous_start(*c_);
  double log_scale = std::log(w.norm());
  W[0] = w.normalized();
  r(0) = 1.0;
  Eigen::Vector3d v(0.0, 0.0, robin_value);
  s(0) = v.dot(W[0]);
  V[0] = v - s(0) * W[0];
  for (int j = 0; j + 1 < n; ++j) {
    const Eigen::Vector3d wt = step(W[j], j, 0.0, 0.0, 0.0);
    const Eigen::Vector3d vt = step(V[j], j, rhs(j), rhs_mid(j), rhs(j + 1));
    r(j + 1) = wt.norm();
    if (!std::isfinite(r(j + 1)) || !vt.allFinite())
      throw NearResonanceError("mode solve: integration produced non-finite values", parity, m1, m2, NAN);
    W[j + 1] = wt / r(j + 1);
    s(j + 1) = vt.dot(W[j + 1]);
    V[j + 1] = vt - s(j + 1) * W[j + 1];
    log_scale += std::log(r(j + 1));
  }

  ModeSolution sol;
  const double wl = W[n - 1](1);
  sol.vartheta = wl == 0.0 ? LogValue{-INFINITY, 0}
                           : LogValue{log_scale + std::log(std::abs(wl)), wl > 0.0 ? 1 : -1};
  if (!(sol.vartheta.log_abs >= std::log(threshold))) {
    throw NearResonanceError("mode (" + std::to_string(parity) + ", " + std::to_string(m1) + ", " +
                                 std::to_string(m2) + ") is near resonance: |vartheta| below threshold",
                             parity, m1, m2, sol.vartheta.value());
  }

  const double bL = c_->nodes.b(n - 1);
  Eigen::VectorXd coef(n);
  coef(n - 1) = (bL * dirichlet_value - V[n - 1](1)) / wl;
  for (int j = n - 1; j > 0; --j) coef(j - 1) = (coef(j) - s(j)) / r(j);

  sol.P.resize(n);
  sol.dP.resize(n);
  sol.ddP.resize(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d y = V[j] + coef(j) * W[j];
    sol.P(j) = y(0);
    sol.dP(j) = y(1);
    sol.ddP(j) = y(2);
  }
  sol.P(0) = 0.0;
  sol.p = sol.dP.cwiseQuotient(c_->nodes.b);
  return sol;
}

ModeSolution solve_mode_bvp(const ModeBVPSystem& system, double threshold_factor) {
  if (system.coeffs == nullptr) throw ShapeError("mode solve: missing coefficients");
  const ModeOperator op(*system.coeffs, system.k2());
  return op.solve(system.rhs, system.robin_value, system.dirichlet_value,
                  resonance_threshold(*system.coeffs, threshold_factor), system.parity, system.m1, system.m2);
}

}  // namespace fanno
