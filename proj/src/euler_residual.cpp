#include "fanno/euler_residual.hpp"

#include <cmath>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"

namespace fanno {

EulerResidualNorms residual_norms(const std::array<Field, 5>& fields) {
  EulerResidualNorms n;
  for (int e = 0; e < 5; ++e) {
    n.max[e] = fields[e].cwiseAbs().maxCoeff();
    n.l2[e] = std::sqrt(fields[e].squaredNorm() / static_cast<double>(fields[e].size()));
  }
  return n;
}

EulerResidual euler_residual(const FlowFields& U, const GasModel& gas, const TangentialBasis& basis, double h) {
  if (U.p.rows() != basis.n_points()) throw ShapeError("euler_residual: field rows do not match n_t^2");
  auto div = [&](const Field& f0, const Field& f1, const Field& f2) -> Field {
    return axial_d(f0, h) + basis.d1(f1) + basis.d2(f2);
  };
  const Field m0 = U.rho.cwiseProduct(U.u0);
  const Field m1 = U.rho.cwiseProduct(U.u1);
  const Field m2 = U.rho.cwiseProduct(U.u2);
  const double mu = gas.mu;
  const Field drag = mu * U.rho.array() * U.u0.array().square();

  EulerResidual r;
  r.fields[kMass] = div(m0, m1, m2);
  r.fields[kMomentum0] = div(m0.cwiseProduct(U.u0) + U.p, m1.cwiseProduct(U.u0), m2.cwiseProduct(U.u0)) + drag;
  r.fields[kMomentum1] = div(m0.cwiseProduct(U.u1), m1.cwiseProduct(U.u1) + U.p, m2.cwiseProduct(U.u1));
  r.fields[kMomentum2] = div(m0.cwiseProduct(U.u2), m1.cwiseProduct(U.u2), m2.cwiseProduct(U.u2) + U.p);
  r.fields[kEnergy] =
      div(m0.cwiseProduct(U.E), m1.cwiseProduct(U.E), m2.cwiseProduct(U.E)) + drag.cwiseProduct(U.u0);
  r.norms = residual_norms(r.fields);
  return r;
}

}  // namespace fanno
