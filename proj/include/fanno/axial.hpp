#pragma once

#include <Eigen/Dense>

namespace fanno {

// Operators along x^0. Matrices are treated column-wise: column j is the sample at x_j,
// so a field (points x n0) and a row vector (1 x n0) use the same code.

/// First derivative, centered inside, second-order one-sided at the ends.
Eigen::MatrixXd axial_d(const Eigen::MatrixXd& f, double h);
/// Second derivative, centered inside, second-order one-sided at the ends.
Eigen::MatrixXd axial_dd(const Eigen::MatrixXd& f, double h);
/// I_j = integral of f from x_0 to x_j (composite Simpson on even nodes,
/// three-point interval rule on odd nodes; trapezoid when only two nodes exist).
Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& f, double h);
/// Value at x_j + h/2 by four-point Lagrange interpolation (shifted stencil at the ends).
Eigen::VectorXd axial_midpoint(const Eigen::MatrixXd& f, int j);

inline Eigen::VectorXd axial_d(const Eigen::VectorXd& f, double h) {
  return axial_d(Eigen::MatrixXd(f.transpose()), h).transpose();
}
inline Eigen::VectorXd axial_dd(const Eigen::VectorXd& f, double h) {
  return axial_dd(Eigen::MatrixXd(f.transpose()), h).transpose();
}
inline Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& f, double h) {
  return cumulative_integral(Eigen::MatrixXd(f.transpose()), h).transpose();
}
double axial_midpoint(const Eigen::VectorXd& f, int j);

}  // namespace fanno
