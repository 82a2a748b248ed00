#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"
#include "fanno/nonlocal_elliptic.hpp"
#include "support/manufactured.hpp"

using namespace fanno;

namespace {

struct Rig {
  DuctSpec spec;
  GasModel gas;
  BackgroundProfile prof;
  EllipticCoefficients coeffs;
  TangentialBasis basis;
  oracle::Background bg;
};

Rig make(double mu, int n_steps, int nt = 16, int cut = 6) {
  const GasModel gas{1.4, mu, 1.0, 1.0, 1.0};
  const DuctSpec spec{3.0, n_steps + 1, nt, cut};
  BackgroundProfile prof = integrate_background(0.5, ExitPressure{1.0, 0.0}, 3.0, gas, n_steps);
  EllipticCoefficients c = assemble_coefficients(prof, gas);
  oracle::Background bg{1.4, mu, 0.5, prof.mass_flux, prof.A};
  return Rig{spec, gas, prof, c, TangentialBasis(spec), bg};
}

Eigen::VectorXd cross_section(const TangentialBasis& b, const std::function<double(double, double)>& f) {
  const int n = b.n_t();
  Eigen::VectorXd v(n * n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) v(i1 + n * i2) = f(b.nodes()(i1), b.nodes()(i2));
  return v;
}

Field random_field(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  Field f(rows, cols);
  for (Eigen::Index k = 0; k < f.size(); ++k) f.data()[k] = N(rng);
  return f;
}

}  // namespace

TEST(Elliptic, ApplyOperatorZero) {
  const Rig s = make(0.1, 40);
  EXPECT_TRUE(apply_operator(Field::Zero(s.spec.n_points(), s.spec.grid_n0), s.coeffs, s.basis).isZero(0.0));
}

TEST(Elliptic, ApplyOperatorFrictionlessUniformSection) {
  const Rig s = make(0.0, 60);
  Field p(s.spec.n_points(), s.spec.grid_n0);
  for (int j = 0; j < s.spec.grid_n0; ++j) p.col(j).setConstant(std::pow(s.coeffs.x0(j), 3));
  const Field Lp = apply_operator(p, s.coeffs, s.basis);
  for (int j = 1; j + 1 < s.spec.grid_n0; ++j)
    EXPECT_NEAR(Lp(0, j), s.coeffs.nodes.e1(j) * 6 * s.coeffs.x0(j), 1e-9);
}

TEST(Elliptic, ApplyOperatorManufacturedSecondOrder) {
  std::vector<double> hs, errs;
  for (int n : {100, 200, 400}) {
    const Rig s = make(0.1, n, 8, 3);
    Field p(s.spec.n_points(), s.spec.grid_n0);
    const Eigen::VectorXd c1 = cross_section(s.basis, [](double a, double) { return std::cos(a); });
    for (int j = 0; j <= n; ++j) p.col(j) = std::pow(s.coeffs.x0(j), 2) * c1;
    const Field Lp = apply_operator(p, s.coeffs, s.basis);
    oracle::Profile1D q{[](double x) { return x * x; }, [](double x) { return 2 * x; }, [](double) { return 2.0; }};
    const Eigen::VectorXd exact = oracle::mode_source(s.bg, q, 1.0, 3.0, n);
    double err = 0.0;
    for (int j = 0; j <= n; ++j) err = std::max(err, (Lp.col(j) - exact(j) * c1).cwiseAbs().maxCoeff());
    hs.push_back(3.0 / n);
    errs.push_back(err);
  }
  // Quadratic in x^0: the differences are exact, leaving the integral rule (higher order).
  EXPECT_LT(errs.back(), 1e-9);
}

TEST(Elliptic, HomogeneousDataGivesZero) {
  const Rig s = make(0.1, 100);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(s.spec.n_points());
  EXPECT_TRUE(solve_nonlocal_elliptic(Field::Zero(s.spec.n_points(), s.spec.grid_n0), z, z, s.coeffs, s.basis)
                  .isZero(0.0));
}

TEST(Elliptic, ManufacturedSolution) {
  const int n = 1000;
  const Rig s = make(0.1, n, 16, 6);
  // p* = q_a(x) cos(x1) cos(2 x2) + q_b(x) sin(3 x1)
  oracle::Profile1D qa{[](double x) { return std::exp(-x) + 0.1 * x; }, [](double x) { return -std::exp(-x) + 0.1; },
                       [](double x) { return std::exp(-x); }};
  oracle::Profile1D qb{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
                       [](double x) { return -std::sin(x); }};
  const Eigen::VectorXd ca = cross_section(s.basis, [](double a, double b) { return std::cos(a) * std::cos(2 * b); });
  const Eigen::VectorXd cb = cross_section(s.basis, [](double a, double) { return std::sin(3 * a); });
  const Eigen::VectorXd ha = oracle::mode_source(s.bg, qa, 5.0, 3.0, n);
  const Eigen::VectorXd hb = oracle::mode_source(s.bg, qb, 9.0, 3.0, n);
  Field h(s.spec.n_points(), n + 1), exact(s.spec.n_points(), n + 1);
  for (int j = 0; j <= n; ++j) {
    const double x = s.coeffs.x0(j);
    h.col(j) = ha(j) * ca + hb(j) * cb;
    exact.col(j) = qa.f(x) * ca + qb.f(x) * cb;
  }
  const double g = oracle::robin_constant(s.bg);
  const Eigen::VectorXd g0 = (qa.df(0) + g * qa.f(0)) * ca + (qb.df(0) + g * qb.f(0)) * cb;
  const Eigen::VectorXd g1 = qa.f(3.0) * ca + qb.f(3.0) * cb;
  const Field p = solve_nonlocal_elliptic(h, g0, g1, s.coeffs, s.basis);
  EXPECT_LT((p - exact).cwiseAbs().maxCoeff(), 1e-6);
  // Traces by one-sided differences.
  const Field d = axial_d(p, s.coeffs.h());
  EXPECT_LT((d.col(0) + s.coeffs.gamma0 * p.col(0) - g0).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LT((p.col(n) - g1).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Elliptic, LinearityAndModeLocality) {
  const Rig s = make(0.1, 200, 16, 6);
  const Field h1 = s.basis.truncate(random_field(s.spec.n_points(), s.spec.grid_n0, 1));
  const Field h2 = s.basis.truncate(random_field(s.spec.n_points(), s.spec.grid_n0, 2));
  const Eigen::VectorXd g01 = s.basis.truncate(random_field(s.spec.n_points(), 1, 3)).col(0);
  const Eigen::VectorXd g02 = s.basis.truncate(random_field(s.spec.n_points(), 1, 4)).col(0);
  const Eigen::VectorXd g11 = s.basis.truncate(random_field(s.spec.n_points(), 1, 5)).col(0);
  const Eigen::VectorXd g12 = s.basis.truncate(random_field(s.spec.n_points(), 1, 6)).col(0);
  const double a = 0.7, b = -1.9;
  const Field p1 = solve_nonlocal_elliptic(h1, g01, g11, s.coeffs, s.basis);
  const Field p2 = solve_nonlocal_elliptic(h2, g02, g12, s.coeffs, s.basis);
  const Field p = solve_nonlocal_elliptic(a * h1 + b * h2, a * g01 + b * g02, a * g11 + b * g12, s.coeffs, s.basis);
  EXPECT_LT((p - (a * p1 + b * p2)).cwiseAbs().maxCoeff() / p.cwiseAbs().maxCoeff(), 1e-10);

  const Eigen::VectorXd only = cross_section(s.basis, [](double x1, double x2) { return std::cos(2 * x1) * std::sin(x2); });
  const FourierField F = solve_nonlocal_elliptic_modes(Field::Zero(s.spec.n_points(), s.spec.grid_n0),
                                                       Eigen::VectorXd::Zero(s.spec.n_points()), only, s.coeffs, s.basis);
  const FourierField G = analyze(synthesize(F, s.basis), s.basis);
  for (int i = 1; i <= 4; ++i)
    for (int m2 = 0; m2 <= G.cut; ++m2)
      for (int m1 = 0; m1 <= G.cut; ++m1) {
        if (i == 3 && m1 == 2 && m2 == 1) continue;
        for (int j = 0; j < G.n0(); ++j) EXPECT_LT(std::abs(G.at(i, m1, m2, j)), 1e-12);
      }
}

TEST(Elliptic, FrictionlessMatchesLocalSolve) {
  const Rig s = make(0.0, 800, 8, 3);
  const Eigen::VectorXd g1 = cross_section(s.basis, [](double a, double b) { return std::cos(a + b) + 0.5; });
  const Eigen::VectorXd g0 = cross_section(s.basis, [](double a, double) { return std::sin(2 * a); });
  const Field p = solve_nonlocal_elliptic(Field::Zero(s.spec.n_points(), s.spec.grid_n0), g0, g1, s.coeffs, s.basis);
  const double t = s.prof.t(0), L = 3.0;
  // Each mode solves (t - 1) q'' - k^2 q = 0 with q'(0) = g0_m, q(L) = g1_m (gamma0 = 0).
  auto mode = [&](double k, double g0m, double g1m, double x) {
    if (k == 0.0) return g1m + g0m * (x - L);
    const double kap = k / std::sqrt(1 - t);
    const double B = g0m / kap;
    return (g1m * std::cosh(kap * x) + B * std::sinh(kap * (x - L))) / std::cosh(kap * L);
  };
  double err = 0.0;
  for (int j = 0; j < s.spec.grid_n0; ++j) {
    const double x = s.coeffs.x0(j);
    for (int i2 = 0; i2 < 8; ++i2)
      for (int i1 = 0; i1 < 8; ++i1) {
        const double a = s.basis.nodes()(i1), b = s.basis.nodes()(i2);
        const double exact = mode(0, 0, 0.5, x) + std::cos(a) * std::cos(b) * mode(std::sqrt(2.0), 0, 1, x) -
                             std::sin(a) * std::sin(b) * mode(std::sqrt(2.0), 0, 1, x) +
                             std::sin(2 * a) * mode(2, 1, 0, x);
        err = std::max(err, std::abs(p(i1 + 8 * i2, j) - exact));
      }
  }
  EXPECT_LT(err, 1e-8);
}

TEST(Elliptic, AprioriRatio) {
  const Rig s = make(0.1, 100, 8, 3);
  const int np = s.spec.n_points(), n0 = s.spec.grid_n0;
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(np);
  EXPECT_EQ(apriori_bound_check(Field::Zero(np, n0), Field::Zero(np, n0), z, z, s.basis, s.coeffs.h(), 2), 0.0);
  EXPECT_THROW(apriori_bound_check(Field::Ones(np, n0), Field::Zero(np, n0), z, z, s.basis, s.coeffs.h(), 2),
               std::logic_error);
  double lo = INFINITY, hi = 0.0;
  for (unsigned k = 0; k < 20; ++k) {
    const Field h = s.basis.truncate(random_field(np, n0, 100 + k));
    const Eigen::VectorXd g0 = s.basis.truncate(random_field(np, 1, 200 + k)).col(0);
    const Eigen::VectorXd g1 = s.basis.truncate(random_field(np, 1, 300 + k)).col(0);
    const Field p = solve_nonlocal_elliptic(h, g0, g1, s.coeffs, s.basis);
    const double r = apriori_bound_check(p, h, g0, g1, s.basis, s.coeffs.h(), 2);
    EXPECT_TRUE(std::isfinite(r));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    if (k == 0) {
      const Field p3 = solve_nonlocal_elliptic(3.0 * h, 3.0 * g0, 3.0 * g1, s.coeffs, s.basis);
      EXPECT_NEAR(apriori_bound_check(p3, 3.0 * h, 3.0 * g0, 3.0 * g1, s.basis, s.coeffs.h(), 2), r, 1e-10 * r);
    }
  }
  EXPECT_LT(hi / lo, 100.0);
}
