#pragma once

#include "fanno/fourier.hpp"

namespace fanno {

/// Sum over all mixed derivatives of total order <= k of their sup over the grid:
/// finite differences in x^0, spectral in x'. Negative k gives 0.
double field_norm(const Field& f, int k, const TangentialBasis& basis, double h);

/// Same for a single cross-section (derivatives in x' only).
double boundary_norm(const Eigen::VectorXd& g, int k, const TangentialBasis& basis);

}  // namespace fanno
