#pragma once

// Independent reference computations used by the tests. Nothing here calls into the library's
// numerical routines; they are re-derived from the closed-form flow relations.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Root of 1/t + ln t = target on (lo, hi) by plain bisection on t = M^2.
inline double mach_by_bisection(double M0, double gamma, double mu, double x) {
  const double target = 1.0 / (M0 * M0) + std::log(M0 * M0) - mu * (gamma + 1.0) * x;
  double lo = M0 < 1.0 ? M0 * M0 : 1.0;
  double hi = M0 < 1.0 ? 1.0 : M0 * M0;
  const bool sub = M0 < 1.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = 1.0 / mid + std::log(mid) - target;
    if ((f > 0.0) == sub)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

/// Background state from the mass flux j and A = p / rho^gamma at Mach M.
struct State {
  double M, t, rho, u, p, c2, E;
};
inline State background_state(double M, double j, double A, double gamma) {
  State s;
  s.M = M;
  s.t = M * M;
  s.rho = std::pow(j * j / (gamma * A * s.t), 1.0 / (gamma + 1.0));
  s.u = j / s.rho;
  s.p = A * std::pow(s.rho, gamma);
  s.c2 = gamma * s.p / s.rho;
  s.E = 0.5 * s.u * s.u + s.c2 / (gamma - 1.0);
  return s;
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

/// Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 64, int order = 8) {
  static thread_local std::pair<Eigen::VectorXd, Eigen::VectorXd> gl;
  if (gl.first.size() != order) gl = gauss_legendre(order);
  if (b <= a) return 0.0;
  double total = 0.0;
  const double w = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * w;
    for (int i = 0; i < order; ++i) total += 0.5 * w * gl.second(i) * f(lo + 0.5 * w * (gl.first(i) + 1.0));
  }
  return total;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
