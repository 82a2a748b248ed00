#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"
#include "fanno/iteration.hpp"
#include "support/oracles.hpp"

using namespace fanno;

namespace {

DuctProblem small_problem(double mu = 0.1, int n = 100, int nt = 16, int cut = 4) {
  return make_problem(GasModel{1.4, mu, 1.0, 1.0, 1.0}, 0.5, ExitPressure{1.0, 0.0}, DuctSpec{3.0, n + 1, nt, cut});
}

// Smooth band-limited field with random amplitudes.
Field smooth_field(const DuctProblem& pr, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
  const int n = pr.basis.n_t();
  Field f(pr.spec.n_points(), pr.spec.grid_n0);
  for (int j = 0; j < f.cols(); ++j) {
    const double x = pr.coeffs.x0(j);
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        const double x1 = pr.basis.nodes()(i1), x2 = pr.basis.nodes()(i2);
        f(i1 + n * i2, j) = a * std::cos(x1) * (1 + 0.3 * x) + b * std::sin(x2 + 0.5 * x) +
                            c * std::cos(x1 - 2 * x2) * std::exp(-0.2 * x) + d * 0.5;
      }
  }
  return f;
}

PerturbationState smooth_state(const DuctProblem& pr, std::mt19937& rng) {
  return PerturbationState{smooth_field(pr, rng), smooth_field(pr, rng), smooth_field(pr, rng), smooth_field(pr, rng),
                           smooth_field(pr, rng)};
}

Eigen::VectorXd cross(const DuctProblem& pr, const std::function<double(double, double)>& f) {
  const int n = pr.basis.n_t();
  Eigen::VectorXd v(n * n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) v(i1 + n * i2) = f(pr.basis.nodes()(i1), pr.basis.nodes()(i2));
  return v;
}

BoundaryData smooth_boundary(const DuctProblem& pr, double eps) {
  BoundaryData bd;
  bd.E0 = eps * cross(pr, [](double a, double b) { return std::cos(a) * std::sin(b); });
  bd.A0 = eps * cross(pr, [](double a, double) { return 0.5 * std::sin(a); });
  bd.u1 = eps * cross(pr, [](double, double b) { return std::cos(b); });
  bd.u2 = eps * cross(pr, [](double a, double b) { return 0.3 * std::sin(a + b); });
  bd.p1 = eps * cross(pr, [](double a, double) { return std::cos(a); });
  return bd;
}

CharacteristicMap map_of(const PerturbationState& s, const DuctProblem& pr) {
  const FlowFields U = reconstruct(s, pr);
  return trace_characteristics(U.u0, U.u1, U.u2, pr.basis, pr.spec.h());
}

double sup(const Field& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(DiscreteNorm, AxiomsOnRandomStates) {
  const DuctProblem pr = small_problem();
  const double h = pr.spec.h();
  EXPECT_EQ(discrete_norm(PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0), 2, pr.basis, h), 0.0);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const PerturbationState a = smooth_state(pr, rng), b = smooth_state(pr, rng);
    const double na = discrete_norm(a, 2, pr.basis, h), nb = discrete_norm(b, 2, pr.basis, h);
    EXPECT_NEAR(discrete_norm(a.scaled(-2.5), 2, pr.basis, h), 2.5 * na, 1e-12 * na);
    EXPECT_LE(discrete_norm(a - b.scaled(-1.0), 2, pr.basis, h), na + nb);
    EXPECT_GT(discrete_norm(a, 3, pr.basis, h), na);
  }
}

TEST(Reconstruct, BackgroundAndPositivity) {
  const DuctProblem pr = small_problem();
  const FlowFields& U = pr.base;
  for (int j = 0; j < pr.spec.grid_n0; j += 10) {
    EXPECT_NEAR(U.u0(0, j), pr.profile.u(j), 1e-13);
    EXPECT_NEAR(U.rho(5, j), pr.profile.rho(j), 1e-13);
  }
  PerturbationState s = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  s.p(0, 0) = -2.0 * pr.profile.p(0);
  EXPECT_THROW(reconstruct(s, pr), DomainError);
  s = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  s.E(4, 4) = -pr.profile.E(4);
  EXPECT_THROW(reconstruct(s, pr), DomainError);
}

TEST(HigherOrderTerms, VanishAtBackground) {
  const DuctProblem pr = small_problem();
  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  const CharacteristicMap m = map_of(z, pr);
  EXPECT_TRUE(assemble_H(z, pr).isZero(0.0));
  EXPECT_TRUE(assemble_F(z, pr, m).isZero(0.0));
  const PressureTerms T = assemble_pressure_terms(z, pr);
  EXPECT_TRUE(T.F1.isZero(0.0));
  EXPECT_TRUE(T.F4.isZero(0.0));
  EXPECT_TRUE(assemble_F0(z.A, Eigen::VectorXd::Zero(pr.spec.n_points()), pr, m).isZero(0.0));
  EXPECT_TRUE(assemble_G(z, BoundaryData::zeros(pr.spec.n_points()), pr).total().isZero(0.0));
}

TEST(HigherOrderTerms, F1VanishesForAxialOnlyPerturbation) {
  const DuctProblem pr = small_problem();
  PerturbationState s = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  for (int j = 0; j < pr.spec.grid_n0; ++j) {
    const double x = pr.coeffs.x0(j);
    s.p.col(j).setConstant(1e-2 * std::sin(x));
    s.E.col(j).setConstant(1e-2 * x);
    s.A.col(j).setConstant(1e-3);
  }
  // Spectral derivatives of constants are zero up to round-off.
  EXPECT_LT(sup(assemble_pressure_terms(s, pr).F1), 1e-13);
}

TEST(HigherOrderTerms, HForTangentialVelocityOnly) {
  const DuctProblem pr = small_problem();
  std::mt19937 rng(5);
  PerturbationState s = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  s.u1 = 1e-2 * smooth_field(pr, rng);
  s.u2 = 1e-2 * smooth_field(pr, rng);
  const Field expect = 0.1 * (s.u1.array().square() + s.u2.array().square()).matrix();
  EXPECT_LT(sup(assemble_H(s, pr) - expect), 1e-18);
}

TEST(HigherOrderTerms, QuadraticScaling) {
  const DuctProblem pr = small_problem();
  std::mt19937 rng(9);
  const PerturbationState s = smooth_state(pr, rng);
  const std::vector<double> eps{1e-2, 1e-3, 1e-4};
  std::vector<double> nF, nH, nF4;
  for (double e : eps) {
    const PerturbationState se = s.scaled(e);
    const CharacteristicMap m = map_of(se, pr);
    nF.push_back(sup(assemble_F(se, pr, m)));
    nH.push_back(sup(assemble_H(se, pr)));
    nF4.push_back(sup(assemble_pressure_terms(se, pr).F4));
  }
  EXPECT_NEAR(oracle::loglog_slope(eps, nF), 2.0, 0.05);
  EXPECT_NEAR(oracle::loglog_slope(eps, nH), 2.0, 0.05);
  EXPECT_NEAR(oracle::loglog_slope(eps, nF4), 2.0, 0.05);
}

TEST(F0, ZeroAndFrictionlessVanish) {
  const DuctProblem pr = small_problem();
  std::mt19937 rng(1);
  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  const CharacteristicMap m = map_of(z, pr);
  EXPECT_TRUE(assemble_F0(z.A, Eigen::VectorXd::Zero(pr.spec.n_points()), pr, m).isZero(0.0));
  const DuctProblem pr0 = small_problem(0.0);
  const Field A = 1e-3 * smooth_field(pr0, rng);
  const Eigen::VectorXd E0 = cross(pr0, [](double a, double) { return std::cos(a); });
  EXPECT_TRUE(assemble_F0(A, E0, pr0, map_of(z, pr0)).isZero(0.0));
}

TEST(F0, ConstantEntropyOnStraightCharacteristics) {
  const DuctProblem pr = small_problem(0.1, 200);
  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  const CharacteristicMap m = map_of(z, pr);
  const double a = 2e-3, mu = 0.1, g = 1.4;
  const Eigen::VectorXd E0 = cross(pr, [](double x1, double x2) { return 1e-3 * std::cos(x1 + x2); });
  const Field A = Field::Constant(pr.spec.n_points(), pr.spec.grid_n0, a);
  const Field F0 = assemble_F0(A, E0, pr, m);
  for (int j = 0; j < pr.spec.grid_n0; j += 17) {
    const double x = pr.coeffs.x0(j);
    const double I = oracle::integrate(
        [&](double tau) {
          return 2 * mu / (g - 1) * std::exp(2 * mu * tau) * std::pow(background_point(pr.profile, tau).rho, g - 1);
        },
        0.0, x);
    const Eigen::VectorXd expect =
        (pr.coeffs.nodes.e5(j) * a + pr.coeffs.nodes.e6(j) * (E0.array() + a * I)).matrix();
    EXPECT_LT((F0.col(j) - expect).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RobinData, LinearityAndOrders) {
  const DuctProblem pr = small_problem();
  const Eigen::VectorXd rho = Eigen::VectorXd::Constant(pr.spec.n_points(), 1.3);
  const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(pr.spec.n_points(), 0.4);
  const Eigen::VectorXd c2 = Eigen::VectorXd::Constant(pr.spec.n_points(), 1.1);
  const Eigen::VectorXd div = cross(pr, [](double a, double b) { return std::sin(a) * std::cos(b); });
  EXPECT_LT((robin_G1(rho, u0, c2, 2.0 * div) - 2.0 * robin_G1(rho, u0, c2, div)).cwiseAbs().maxCoeff(), 1e-15);

  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  std::vector<double> eps{1e-2, 1e-3, 1e-4}, g2, g3;
  for (double e : eps) {
    BoundaryData bd = smooth_boundary(pr, e);
    bd.E0.setZero();
    bd.A0.setZero();
    PerturbationState s = z;
    s.p.col(0) = e * cross(pr, [](double a, double b) { return std::cos(a - b); });
    const RobinTerms G = assemble_G(s, bd, pr);
    g2.push_back(G.G2.cwiseAbs().maxCoeff());
    g3.push_back(G.G3.cwiseAbs().maxCoeff());
  }
  // With E and A(s) unperturbed on the entry, G2 and G3 are both second order.
  EXPECT_NEAR(oracle::loglog_slope(eps, g2), 2.0, 0.05);
  EXPECT_NEAR(oracle::loglog_slope(eps, g3), 2.0, 0.05);
}

TEST(MappingT, BackgroundIsFixedPoint) {
  const DuctProblem pr = small_problem();
  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  EXPECT_TRUE(apply_T(z, BoundaryData::zeros(pr.spec.n_points()), pr, IterationConfig{}).is_zero());
  const FixedPointResult r = solve_fixed_point(BoundaryData::zeros(pr.spec.n_points()), pr, IterationConfig{});
  EXPECT_EQ(r.report.iters, 1);
  EXPECT_TRUE(r.report.converged);
  EXPECT_TRUE(r.state.is_zero());
}

TEST(MappingT, OneApplicationImposesBoundaryData) {
  const DuctProblem pr = small_problem(0.1, 200);
  const BoundaryData bd = smooth_boundary(pr, 1e-3);
  const PerturbationState z = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  const PerturbationState s = apply_T(z, bd, pr, IterationConfig{});
  const int L = pr.spec.grid_n0 - 1;
  EXPECT_LT((s.p.col(L) - bd.p1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((s.A.col(0) - bd.A0).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_LT((s.E.col(0) - bd.E0).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_LT((s.u1.col(0) - bd.u1).cwiseAbs().maxCoeff(), 1e-16);
  EXPECT_LT((s.u2.col(0) - bd.u2).cwiseAbs().maxCoeff(), 1e-16);
  const Eigen::VectorXd robin = axial_d(s.p, pr.spec.h()).col(0) + pr.coeffs.gamma0 * s.p.col(0);
  EXPECT_LT((robin - assemble_G(z, bd, pr).total()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(MappingT, StageErrorsAreTagged) {
  const DuctProblem pr = small_problem();
  PerturbationState s = PerturbationState::zeros(pr.spec.n_points(), pr.spec.grid_n0);
  s.E.setConstant(-10.0);
  try {
    apply_T(s, BoundaryData::zeros(pr.spec.n_points()), pr, IterationConfig{});
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "reconstruct");
  }
}

TEST(MappingT, ContractionOnRandomPairs) {
  const DuctProblem pr = small_problem();
  const double eps = 1e-3, h = pr.spec.h();
  const BoundaryData bd = smooth_boundary(pr, eps);
  std::mt19937 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const PerturbationState a = smooth_state(pr, rng).scaled(eps), b = smooth_state(pr, rng).scaled(eps);
    const double lhs = discrete_norm(apply_T(a, bd, pr, {}) - apply_T(b, bd, pr, {}), 2, pr.basis, h);
    EXPECT_LE(lhs, 0.5 * discrete_norm(a - b, 2, pr.basis, h));
  }
}

TEST(FixedPoint, RatioScalesWithEpsilon) {
  const DuctProblem pr = small_problem();
  std::vector<double> eps{1e-3, 5e-4, 2.5e-4}, ratio, size;
  std::vector<int> iters;
  for (double e : eps) {
    IterationConfig cfg;
    cfg.eps = e;
    const FixedPointResult r = solve_fixed_point(smooth_boundary(pr, e), pr, cfg);
    ASSERT_TRUE(r.report.converged);
    ratio.push_back(r.report.ratio_estimates.front());
    size.push_back(discrete_norm(r.state, 2, pr.basis, pr.spec.h()) / e);
    iters.push_back(r.report.iters);
    // The converged state is a fixed point to the stopping tolerance.
    const PerturbationState again = apply_T(r.state, smooth_boundary(pr, e), pr, cfg);
    EXPECT_LE(discrete_norm(again - r.state, 2, pr.basis, pr.spec.h()), cfg.tolerance());
  }
  EXPECT_NEAR(oracle::loglog_slope(eps, ratio), 1.0, 0.15);
  EXPECT_LE(iters[1], iters[0]);
  EXPECT_LE(iters[2], iters[1]);
  EXPECT_NEAR(size[2] / size[0], 1.0, 0.05);
}

TEST(FixedPoint, ReportJson) {
  ContractionReport r;
  r.iters = 3;
  r.update_norms = {1e-2, 1e-5, 1e-8};
  r.ratio_estimates = {1e-3, 1e-3};
  r.converged = true;
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["iters"], 3);
  EXPECT_EQ(j["update_norms"].size(), 3u);
  EXPECT_TRUE(j["converged"].get<bool>());
  for (const char* k : {"mass", "momentum0", "momentum1", "momentum2", "energy"})
    EXPECT_TRUE(j["final_residuals"].contains(k));
}

TEST(EulerResidual, UniformFrictionlessFlowIsExact) {
  const TangentialBasis basis(16, 4);
  FlowFields U;
  const Field one = Field::Ones(256, 21);
  U.p = 0.8 * one;
  U.rho = 1.2 * one;
  U.u0 = 0.3 * one;
  U.u1 = 0.05 * one;
  U.u2 = -0.02 * one;
  U.c2 = 1.4 * U.p.cwiseQuotient(U.rho);
  U.A = one;
  U.E = 0.5 * (U.u0.array().square() + U.u1.array().square() + U.u2.array().square()).matrix() + U.c2 / 0.4;
  const EulerResidual r = euler_residual(U, GasModel{1.4, 0.0, 1, 1, 1}, basis, 0.05);
  for (int e = 0; e < 5; ++e) EXPECT_LT(r.norms.max[e], 1e-13);
}

TEST(EulerResidual, BackgroundConvergesAtSecondOrder) {
  std::vector<double> hs;
  std::array<std::vector<double>, 5> res;
  for (int n : {50, 100, 200}) {
    const DuctProblem pr = small_problem(0.1, n, 8, 2);
    const EulerResidual r = euler_residual(pr.base, pr.gas, pr.basis, pr.spec.h());
    hs.push_back(pr.spec.h());
    for (int e = 0; e < 5; ++e) res[e].push_back(r.norms.max[e]);
  }
  EXPECT_LT(res[kMass].back(), 1e-13);  // rho u is constant in closed form
  for (int e : {kMomentum0, kEnergy}) EXPECT_NEAR(oracle::loglog_slope(hs, res[e]), 2.0, 0.1) << e;
  EXPECT_LT(res[kMomentum1].back(), 1e-13);
}
