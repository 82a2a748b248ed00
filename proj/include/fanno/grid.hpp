#pragma once

#include <Eigen/Dense>

namespace fanno {

/// Duct [0, L] x T^2 sampled on a uniform tensor grid.
/// Tangential samples x_i = 2 pi i / n_t; fields are stored as (n_t^2, n0) matrices,
/// column j holding the cross-section x^0 = j h with row index i1 + n_t * i2.
struct DuctSpec {
  double length = 1.0;
  int grid_n0 = 101;
  int grid_n_t = 16;
  int mode_cut = 4;

  void validate() const;
  double h() const { return length / (grid_n0 - 1); }
  int n_points() const { return grid_n_t * grid_n_t; }
  /// Highest mode carried by the discrete transform: the Nyquist mode n_t/2 is excluded.
  int effective_cut() const;
  Eigen::VectorXd axial_nodes() const;
  Eigen::VectorXd tangential_nodes() const;
};

using Field = Eigen::MatrixXd;

}  // namespace fanno
