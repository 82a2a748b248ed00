#include "fanno/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fanno/errors.hpp"

namespace fanno {

void DuctSpec::validate() const {
  if (!(length > 0.0)) throw DomainError("duct: length must be positive");
  if (grid_n0 < 2) throw ShapeError("duct: need at least two axial samples");
  if (grid_n_t < 4 || (grid_n_t & (grid_n_t - 1)) != 0)
    throw ShapeError("duct: tangential sample count must be a power of two >= 4");
  if (mode_cut < 0 || mode_cut > grid_n_t / 2) throw ShapeError("duct: mode_cut must lie in [0, n_t/2]");
}

int DuctSpec::effective_cut() const { return std::min(mode_cut, grid_n_t / 2 - 1); }

Eigen::VectorXd DuctSpec::axial_nodes() const {
  return Eigen::VectorXd::LinSpaced(grid_n0, 0.0, length);
}

Eigen::VectorXd DuctSpec::tangential_nodes() const {
  Eigen::VectorXd x(grid_n_t);
  for (int i = 0; i < grid_n_t; ++i) x(i) = 2.0 * std::numbers::pi * i / grid_n_t;
  return x;
}

}  // namespace fanno
