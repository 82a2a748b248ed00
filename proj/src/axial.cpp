#include "fanno/axial.hpp"

#include "fanno/errors.hpp"

namespace fanno {

Eigen::MatrixXd axial_d(const Eigen::MatrixXd& f, double h) {
  const Eigen::Index n = f.cols();
  if (n < 3) throw ShapeError("axial_d: need at least three samples");
  Eigen::MatrixXd d(f.rows(), n);
  d.col(0) = (-3.0 * f.col(0) + 4.0 * f.col(1) - f.col(2)) / (2.0 * h);
  for (Eigen::Index j = 1; j + 1 < n; ++j) d.col(j) = (f.col(j + 1) - f.col(j - 1)) / (2.0 * h);
  d.col(n - 1) = (3.0 * f.col(n - 1) - 4.0 * f.col(n - 2) + f.col(n - 3)) / (2.0 * h);
  return d;
}

Eigen::MatrixXd axial_dd(const Eigen::MatrixXd& f, double h) {
  const Eigen::Index n = f.cols();
  if (n < 4) throw ShapeError("axial_dd: need at least four samples");
  const double h2 = h * h;
  Eigen::MatrixXd d(f.rows(), n);
  d.col(0) = (2.0 * f.col(0) - 5.0 * f.col(1) + 4.0 * f.col(2) - f.col(3)) / h2;
  for (Eigen::Index j = 1; j + 1 < n; ++j)
    d.col(j) = (f.col(j + 1) - 2.0 * f.col(j) + f.col(j - 1)) / h2;
  d.col(n - 1) = (2.0 * f.col(n - 1) - 5.0 * f.col(n - 2) + 4.0 * f.col(n - 3) - f.col(n - 4)) / h2;
  return d;
}

Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& f, double h) {
  const Eigen::Index n = f.cols();
  Eigen::MatrixXd I = Eigen::MatrixXd::Zero(f.rows(), n);
  if (n < 2) return I;
  if (n == 2) {
    I.col(1) = 0.5 * h * (f.col(0) + f.col(1));
    return I;
  }
  for (Eigen::Index j = 2; j < n; j += 2)
    I.col(j) = I.col(j - 2) + h / 3.0 * (f.col(j - 2) + 4.0 * f.col(j - 1) + f.col(j));
  for (Eigen::Index j = 1; j < n; j += 2) {
    if (j + 1 < n)
      I.col(j) = I.col(j - 1) + h / 12.0 * (5.0 * f.col(j - 1) + 8.0 * f.col(j) - f.col(j + 1));
    else
      I.col(j) = I.col(j - 1) + h / 12.0 * (-f.col(j - 2) + 8.0 * f.col(j - 1) + 5.0 * f.col(j));
  }
  return I;
}

Eigen::VectorXd axial_midpoint(const Eigen::MatrixXd& f, int j) {
  const int n = static_cast<int>(f.cols());
  if (n < 4) {
    if (n < 2) throw ShapeError("axial_midpoint: need at least two samples");
    return 0.5 * (f.col(j) + f.col(j + 1));
  }
  if (j == 0) return (5.0 * f.col(0) + 15.0 * f.col(1) - 5.0 * f.col(2) + f.col(3)) / 16.0;
  if (j == n - 2)
    return (f.col(n - 4) - 5.0 * f.col(n - 3) + 15.0 * f.col(n - 2) + 5.0 * f.col(n - 1)) / 16.0;
  return (-f.col(j - 1) + 9.0 * f.col(j) + 9.0 * f.col(j + 1) - f.col(j + 2)) / 16.0;
}

double axial_midpoint(const Eigen::VectorXd& f, int j) {
  return axial_midpoint(Eigen::MatrixXd(f.transpose()), j)(0);
}

}  // namespace fanno
