#pragma once

#include "fanno/coefficients.hpp"
#include "fanno/fourier.hpp"

namespace fanno {

/// e1 p'' - Lap' p + e2 p' + e3 p + e4 int_0^x b p: second-order differences in x^0,
/// spectral in x', cumulative Simpson for the integral.
Field apply_operator(const Field& p_hat, const EllipticCoefficients& coeffs, const TangentialBasis& basis);

/// Solves L p = h, p' + gamma0 p = g0 on x^0 = 0, p = g1 on x^0 = L mode by mode
/// (analyze, per-mode third-order BVP, synthesize). Throws NearResonanceError naming the first
/// resonant mode in (i, m1, m2) order.
FourierField solve_nonlocal_elliptic_modes(const Field& h, const Eigen::VectorXd& g0, const Eigen::VectorXd& g1,
                                           const EllipticCoefficients& coeffs, const TangentialBasis& basis,
                                           double threshold_factor = 1e-8);
Field solve_nonlocal_elliptic(const Field& h, const Eigen::VectorXd& g0, const Eigen::VectorXd& g1,
                              const EllipticCoefficients& coeffs, const TangentialBasis& basis,
                              double threshold_factor = 1e-8);

/// ||p||_k / (||h||_{k-2} + ||g0||_{k-1} + ||g1||_k); 0 for zero data and zero solution.
/// Throws std::logic_error when the data vanish but the solution does not.
double apriori_bound_check(const Field& solution, const Field& h, const Eigen::VectorXd& g0,
                           const Eigen::VectorXd& g1, const TangentialBasis& basis, double h_axial, int k);

}  // namespace fanno
