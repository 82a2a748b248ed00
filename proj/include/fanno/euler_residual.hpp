#pragma once

#include <array>
#include <string>

#include "fanno/fourier.hpp"
#include "fanno/gas.hpp"

namespace fanno {

/// Full flow fields on the duct grid.
struct FlowFields {
  Field p, rho, c2, u0, u1, u2, E, A;
};

enum EulerEquation { kMass = 0, kMomentum0, kMomentum1, kMomentum2, kEnergy };
inline constexpr std::array<const char*, 5> kEulerEquationNames{"mass", "momentum0", "momentum1", "momentum2",
                                                                 "energy"};

struct EulerResidualNorms {
  std::array<double, 5> max{};
  std::array<double, 5> l2{};
};

struct EulerResidual {
  std::array<Field, 5> fields;
  EulerResidualNorms norms;
};

/// Residuals of div(rho u) = 0, div(rho u (x) u) + grad p = rho b, div(rho E u) = rho b . u
/// with b = (-mu (u^0)^2, 0, 0); centered differences in x^0, spectral in x'.
/// The L2 norm is the root mean square over the grid.
EulerResidual euler_residual(const FlowFields& U, const GasModel& gas, const TangentialBasis& basis, double h);

/// Max and RMS norms of a set of residual fields.
EulerResidualNorms residual_norms(const std::array<Field, 5>& fields);

}  // namespace fanno
