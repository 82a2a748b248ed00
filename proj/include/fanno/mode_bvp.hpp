#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fanno/coefficients.hpp"

namespace fanno {

/// Signed value kept as log-magnitude: the homogeneous solution grows like e^{|m| x}.
struct LogValue {
  double log_abs = -INFINITY;
  int sign = 0;
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// One Fourier mode (parity, m) of the nonlocal problem reduced to
///   te1 P''' + te2 P'' + te3 P' + e4 P = h,  P(0) = 0,
///   P''(0) + (gamma0 - b'(0)/b(0)) P'(0) = b(0) g0,  P'(L) = b(L) g1.
struct ModeBVPSystem {
  int parity = 1;
  int m1 = 0, m2 = 0;
  const EllipticCoefficients* coeffs = nullptr;
  Eigen::VectorXd rhs;          // h_{i,m} at the axial nodes
  double robin_value = 0.0;     // b(0) * (g0)_{i,m}
  double dirichlet_value = 0.0; // (g1)_{i,m}

  double k2() const { return double(m1) * m1 + double(m2) * m2; }
};

struct ModeSolution {
  Eigen::VectorXd p;             // P' / b
  Eigen::VectorXd P, dP, ddP;
  LogValue vartheta;             // W'(L) of the homogeneous Cauchy problem
};

/// |vartheta| below this refuses the solve: factor * b(L) * max(1, max|e1..e4|).
double resonance_threshold(const EllipticCoefficients& coeffs, double factor = 1e-8);

/// Integrator for one value of |m|^2 (the reduced problem sees m only through |m|^2).
class ModeOperator {
 public:
  ModeOperator(const EllipticCoefficients& coeffs, double k2);

  /// W'(L) for W(0) = 0, W'(0) = b(0), W''(0) = b'(0) - gamma0 b(0), integrated
  /// with per-step rescaling. Non-finite values yield sign 0 and NaN magnitude.
  LogValue vartheta() const;

  /// Stabilized superposition: the homogeneous solution is renormalized every step and the
  /// particular solution is kept orthogonal to it; coefficients are recovered backward from x = L.
  /// Throws NearResonanceError when |vartheta| < threshold.
  ModeSolution solve(const Eigen::VectorXd& rhs, double robin_value, double dirichlet_value, double threshold,
                     int parity = 1, int m1 = 0, int m2 = 0) const;

  double k2() const { return k2_; }

 private:
  struct Row {
    double a0, a1, a2, q;  // P''' = a0 P + a1 P' + a2 P'' + q h
  };
  Eigen::Vector3d step(const Eigen::Vector3d& y, int j, double hj, double hm, double hj1) const;

  const EllipticCoefficients* c_;
  double k2_;
  std::vector<Row> node_, mid_;
};

ModeSolution solve_mode_bvp(const ModeBVPSystem& system, double threshold_factor = 1e-8);

}  // namespace fanno
