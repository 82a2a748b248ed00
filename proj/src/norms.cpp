#include "fanno/norms.hpp"

#include "fanno/axial.hpp"

namespace fanno {

namespace {

Field axial_derivative(const Field& f, int order, double h) {
  Field g = f;
  while (order >= 2) {
    g = axial_dd(g, h);
    order -= 2;
  }
  if (order == 1) g = axial_d(g, h);
  return g;
}

Field tangential_derivative(const Field& f, int a1, int a2, const TangentialBasis& basis) {
  Field g = f;
  for (; a1 >= 2; a1 -= 2) g = basis.d11(g);
  if (a1 == 1) g = basis.d1(g);
  for (; a2 >= 2; a2 -= 2) g = basis.d22(g);
  if (a2 == 1) g = basis.d2(g);
  return g;
}

}  // namespace

double field_norm(const Field& f, int k, const TangentialBasis& basis, double h) {
  double total = 0.0;
  for (int a0 = 0; a0 <= k; ++a0) {
    const Field g0 = axial_derivative(f, a0, h);
    for (int a1 = 0; a0 + a1 <= k; ++a1)
      for (int a2 = 0; a0 + a1 + a2 <= k; ++a2)
        total += tangential_derivative(g0, a1, a2, basis).cwiseAbs().maxCoeff();
  }
  return total;
}

double boundary_norm(const Eigen::VectorXd& g, int k, const TangentialBasis& basis) {
  double total = 0.0;
  const Field f = g;
  for (int a1 = 0; a1 <= k; ++a1)
    for (int a2 = 0; a1 + a2 <= k; ++a2) total += tangential_derivative(f, a1, a2, basis).cwiseAbs().maxCoeff();
  return total;
}

}  // namespace fanno
