#include "fanno/iteration.hpp"

#include <cmath>
#include <exception>

#include <json.hpp>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"
#include "fanno/nonlocal_elliptic.hpp"
#include "fanno/norms.hpp"

namespace fanno {

namespace {

using Arr = Eigen::ArrayXXd;

// Broadcasts an axial profile (one value per column) over the cross-section.
Arr along_axis(const Eigen::VectorXd& v, Eigen::Index rows) { return v.transpose().replicate(rows, 1).array(); }

// Left-hand side N(U) of the second-order pressure equation.
Arr pressure_operator(const Arr& E, const Arr& c2, const Arr& p, const Arr& P0, const Arr& P00, const Arr& lap,
                      double g, double mu) {
  const Arr q = E - c2 / (g - 1.0);
  return (2.0 * E - (g + 1.0) / (g - 1.0) * c2) * P00 - c2 * lap - 2.0 * mu * q * P0 -
         2.0 / p * (q + c2.square() / (4.0 * g * q)) * P0.square() + 2.0 * mu * mu * g * p * q;
}

struct EntryState {
  Eigen::ArrayXd p, rho, c2, u0sq, u0;
};

EntryState entry_state(const Eigen::VectorXd& p_hat, const Eigen::VectorXd& E_hat, const Eigen::VectorXd& A_hat,
                       const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, const DuctProblem& problem) {
  const double g = problem.gas.gamma;
  EntryState s;
  s.p = problem.profile.p(0) + p_hat.array();
  const Eigen::ArrayXd A = problem.profile.A + A_hat.array();
  const Eigen::ArrayXd E = problem.profile.E(0) + E_hat.array();
  if (!(s.p.minCoeff() > 0.0) || !(A.minCoeff() > 0.0)) throw DomainError("entry state: non-positive p or A(s)");
  s.rho = (s.p / A).pow(1.0 / g);
  s.c2 = g * s.p / s.rho;
  s.u0sq = 2.0 * E - u1.array().square() - u2.array().square() - 2.0 * s.c2 / (g - 1.0);
  if (!(s.u0sq.minCoeff() > 0.0)) throw DomainError("entry state: no positive axial velocity");
  if (((s.u0sq - s.c2).abs() < 1e-12 * s.c2).any()) throw DomainError("entry state: sonic denominator");
  s.u0 = s.u0sq.sqrt();
  return s;
}

Field column_d1(const TangentialBasis& b, const Eigen::VectorXd& v) { return b.d1(Field(v)); }
Field column_d2(const TangentialBasis& b, const Eigen::VectorXd& v) { return b.d2(Field(v)); }

}  // namespace

PerturbationState PerturbationState::zeros(int n_points, int n0) {
  const Field z = Field::Zero(n_points, n0);
  return PerturbationState{z, z, z, z, z};
}

bool PerturbationState::is_zero() const {
  return p.isZero(0.0) && E.isZero(0.0) && A.isZero(0.0) && u1.isZero(0.0) && u2.isZero(0.0);
}

PerturbationState PerturbationState::operator-(const PerturbationState& o) const {
  return PerturbationState{p - o.p, E - o.E, A - o.A, u1 - o.u1, u2 - o.u2};
}

PerturbationState PerturbationState::scaled(double a) const {
  return PerturbationState{a * p, a * E, a * A, a * u1, a * u2};
}

BoundaryData BoundaryData::zeros(int n_points) {
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(n_points);
  return BoundaryData{z, z, z, z, z};
}

bool BoundaryData::is_zero() const {
  return E0.isZero(0.0) && A0.isZero(0.0) && u1.isZero(0.0) && u2.isZero(0.0) && p1.isZero(0.0);
}

double BoundaryData::smallness(const TangentialBasis& basis) const {
  return boundary_norm(E0, 2, basis) + boundary_norm(A0, 2, basis) + boundary_norm(u1, 2, basis) +
         boundary_norm(u2, 2, basis) + boundary_norm(p1, 3, basis);
}

double IterationConfig::tolerance() const { return tol_update > 0.0 ? tol_update : 1e-10 * std::max(1.0, eps); }

void IterationConfig::validate() const {
  if (max_iters < 2) throw std::invalid_argument("iteration: max_iters must be at least 2");
  if (!(tolerance() > 0.0)) throw std::invalid_argument("iteration: tol_update must be positive");
  if (contraction_window < 1) throw std::invalid_argument("iteration: contraction_window must be positive");
  if (!(threshold_factor > 0.0)) throw std::invalid_argument("iteration: threshold factor must be positive");
}

DuctProblem make_problem(const GasModel& gas, double M0, const ThermoAnchor& anchor, const DuctSpec& spec) {
  spec.validate();
  gas.validate();
  if (!(M0 > 0.0 && M0 < 1.0)) throw RegimeError("perturbation problem needs a subsonic entry Mach number");
  DuctProblem pr{gas, spec, closed_form_background(M0, anchor, spec.length, gas, spec.grid_n0 - 1), {},
                 TangentialBasis(spec), {}, {}, {}};
  pr.coeffs = assemble_coefficients(pr.profile, gas);
  const Eigen::Index n0 = pr.profile.size();
  pr.dp_b.resize(n0);
  pr.ddp_b.resize(n0);
  const double g = gas.gamma, mu = gas.mu;
  for (Eigen::Index j = 0; j < n0; ++j) {
    const double t = pr.profile.t(j), p = pr.profile.p(j);
    const double dt = mu * (g + 1.0) * t * t / (1.0 - t);
    const double r = g * mu * t / (1.0 - t);
    pr.dp_b(j) = -r * p;
    pr.ddp_b(j) = p * (r * r - g * mu * dt / ((1.0 - t) * (1.0 - t)));
  }
  pr.base = reconstruct(PerturbationState::zeros(spec.n_points(), spec.grid_n0), pr);
  return pr;
}

FlowFields reconstruct(const PerturbationState& s, const DuctProblem& problem) {
  const Eigen::Index P = problem.spec.n_points();
  if (s.p.rows() != P || s.p.cols() != problem.profile.size()) throw ShapeError("reconstruct: state does not match grid");
  const double g = problem.gas.gamma;
  FlowFields U;
  const Arr p = along_axis(problem.profile.p, P) + s.p.array();
  const Arr A = problem.profile.A + s.A.array();
  const Arr E = along_axis(problem.profile.E, P) + s.E.array();
  if (!(p.minCoeff() > 0.0)) throw DomainError("reconstruct: non-positive pressure");
  if (!(A.minCoeff() > 0.0)) throw DomainError("reconstruct: non-positive entropy function");
  const Arr rho = (p / A).pow(1.0 / g);
  const Arr c2 = g * p / rho;
  const Arr u0sq = 2.0 * E - s.u1.array().square() - s.u2.array().square() - 2.0 * c2 / (g - 1.0);
  if (!(u0sq.minCoeff() > 0.0)) throw DomainError("reconstruct: no positive axial velocity");
  U.p = p.matrix();
  U.A = A.matrix();
  U.E = E.matrix();
  U.rho = rho.matrix();
  U.c2 = c2.matrix();
  U.u0 = u0sq.sqrt().matrix();
  U.u1 = s.u1;
  U.u2 = s.u2;
  return U;
}

double discrete_norm(const PerturbationState& s, int k, const TangentialBasis& basis, double h) {
  return field_norm(s.p, k, basis, h) + field_norm(s.A, k - 1, basis, h) + field_norm(s.E, k - 1, basis, h) +
         field_norm(s.u1, k - 1, basis, h) + field_norm(s.u2, k - 1, basis, h);
}

Field assemble_H(const PerturbationState& s, const DuctProblem& problem) {
  const FlowFields U = reconstruct(s, problem);
  const double g = problem.gas.gamma, mu = problem.gas.mu;
  const Arr rho_b = problem.base.rho.array();
  const Arr lin = (g - 1.0) * s.p.array() / rho_b + rho_b.pow(g - 1.0) * s.A.array();
  const Arr H = mu * (s.u1.array().square() + s.u2.array().square()) +
                2.0 * mu / (g - 1.0) * ((U.c2.array() - problem.base.c2.array()) - lin);
  return H.matrix();
}

PressureTerms assemble_pressure_terms(const PerturbationState& s, const DuctProblem& problem) {
  const FlowFields U = reconstruct(s, problem);
  const TangentialBasis& B = problem.basis;
  const double g = problem.gas.gamma, mu = problem.gas.mu, h = problem.spec.h();
  const Eigen::Index P = problem.spec.n_points();

  const Field Dp = axial_d(s.p, h), DDp = axial_dd(s.p, h);
  const Field P1m = B.d1(s.p), P2m = B.d2(s.p);
  const Arr P0 = along_axis(problem.dp_b, P) + Dp.array();
  const Arr P00 = along_axis(problem.ddp_b, P) + DDp.array();
  const Arr P1 = P1m.array(), P2 = P2m.array();
  const Arr P11 = B.d11(s.p).array(), P12 = B.d12(s.p).array(), P22 = B.d22(s.p).array();
  const Arr P01 = axial_d(P1m, h).array(), P02 = axial_d(P2m, h).array();
  const Arr lap = P11 + P22;

  const Arr p = U.p.array(), rho = U.rho.array(), c2 = U.c2.array(), E = U.E.array(), u0 = U.u0.array();
  const Arr u1 = U.u1.array(), u2 = U.u2.array();
  const Arr du0_1 = B.d1(U.u0).array(), du0_2 = B.d2(U.u0).array();
  const Arr drho_1 = B.d1(U.rho).array(), drho_2 = B.d2(U.rho).array();
  const Arr dA_1 = B.d1(s.A).array(), dA_2 = B.d2(s.A).array();
  const Arr d0u1 = axial_d(s.u1, h).array(), d0u2 = axial_d(s.u2, h).array();
  const Arr d1u1 = B.d1(s.u1).array(), d2u1 = B.d2(s.u1).array();
  const Arr d1u2 = B.d1(s.u2).array(), d2u2 = B.d2(s.u2).array();

  const Arr gp = g * p;
  const Arr up = u1 * P1 + u2 * P2;          // u^beta d_beta p
  const Arr ugu0 = u1 * du0_1 + u2 * du0_2;  // u^beta d_beta u^0
  const Arr w = u1.square() + u2.square();

  PressureTerms T;
  const Arr T1 = (2.0 * u0 * (u1 * P01 + u2 * P02) + u1.square() * P11 + 2.0 * u1 * u2 * P12 + u2.square() * P22) / gp;
  const Arr T2 = (u0 * (d0u1 * P1 + d0u2 * P2) + ugu0 * P0 + (u1 * d1u1 + u2 * d2u1) * P1 +
                  (u1 * d1u2 + u2 * d2u2) * P2) / gp;
  const Arr T3 = -(2.0 * u0 * P0 * up + up.square()) / (gp * p);
  const Arr T4 = -(2.0 * (du0_1 * d0u1 + du0_2 * d0u2) + d1u1.square() + 2.0 * d2u1 * d1u2 + d2u2.square());
  const Arr T5 = (drho_1 * P1 + drho_2 * P2) / rho.square();
  const Arr F1 = T1 + T2 + T3 + T4 + T5;

  const Arr u0sq = u0.square();
  const Arr F2 = -w * (P00 / gp + P0.square() / (gp * p) *
                                      (-1.0 + c2.square() / g / ((2.0 * E - 2.0 * c2 / (g - 1.0)) * u0sq))) +
                 ((mu * w - ugu0) * P0 + rho.pow(g - 1.0) * P0 * (u1 * dA_1 + u2 * dA_2) / u0) / gp -
                 ugu0 / u0sq * (ugu0 + 2.0 * P0 / rho) - mu * mu * w;
  const Arr F3 = -gp * (F1 + F2);

  const FlowFields& Ub = problem.base;
  const Arr c2b = Ub.c2.array(), rho_b = Ub.rho.array();
  const Arr N = pressure_operator(E, c2, p, P0, P00, lap, g, mu);
  const Arr Nb = pressure_operator(Ub.E.array(), c2b, Ub.p.array(), along_axis(problem.dp_b, P),
                                   along_axis(problem.ddp_b, P), Arr::Zero(P, s.p.cols()), g, mu);
  const EllipticCoefficients& C = problem.coeffs;
  const Arr lin = along_axis((C.nodes.t.array() - 1.0).matrix(), P) * DDp.array() - lap +
                  mu * along_axis(C.d1, P) * Dp.array() + mu * mu * along_axis(C.d2, P) * s.p.array() +
                  mu * mu * rho_b * along_axis(C.d3, P) * s.E.array() +
                  mu * mu * rho_b.pow(g) * along_axis(C.d4, P) * s.A.array();
  const Arr F4 = c2b * lin - (N - Nb);

  T.F1 = F1.matrix();
  T.F2 = F2.matrix();
  T.F3 = F3.matrix();
  T.F4 = F4.matrix();
  T.F5 = ((F3 + F4) / c2b).matrix();
  return T;
}

namespace {

Field assemble_F_with(const PerturbationState& s, const Field& H, const DuctProblem& problem,
                      const CharacteristicMap& map) {
  return assemble_pressure_terms(s, problem).F5 + solve_f6_correction(s.p, H, problem.profile, map, problem.basis);
}

}  // namespace

Field assemble_F(const PerturbationState& s, const DuctProblem& problem, const CharacteristicMap& map) {
  return assemble_F_with(s, assemble_H(s, problem), problem, map);
}

Field assemble_F0(const Field& A_hat, const Eigen::VectorXd& E0_hat, const DuctProblem& problem,
                  const CharacteristicMap& map) {
  const TangentialBasis& B = problem.basis;
  const double g = problem.gas.gamma, mu = problem.gas.mu;
  const Eigen::Index n0 = problem.profile.size(), P = B.n_points();
  if (A_hat.rows() != P || A_hat.cols() != n0 || E0_hat.size() != P) throw ShapeError("assemble_F0: shape mismatch");
  Eigen::RowVectorXd w(n0);
  for (Eigen::Index j = 0; j < n0; ++j)
    w(j) = 2.0 * mu / (g - 1.0) * std::exp(2.0 * mu * problem.coeffs.x0(j)) * std::pow(problem.profile.rho(j), g - 1.0);
  Field by_seed = integrate_along(sample_along(A_hat, map, B) * w.asDiagonal(), map.h);
  by_seed.colwise() += E0_hat;
  const Field inner = pull_back(by_seed, map, B);
  return A_hat * problem.coeffs.nodes.e5.asDiagonal() + inner * problem.coeffs.nodes.e6.asDiagonal();
}

Eigen::VectorXd robin_G1(const Eigen::VectorXd& rho, const Eigen::VectorXd& u0, const Eigen::VectorXd& c2,
                         const Eigen::VectorXd& div_u) {
  const Eigen::ArrayXd den = u0.array().square() / c2.array() - 1.0;
  return (-rho.array() * u0.array() * div_u.array() / den).matrix();
}

RobinTerms assemble_G(const PerturbationState& s, const BoundaryData& bd, const DuctProblem& problem) {
  const TangentialBasis& B = problem.basis;
  const double g = problem.gas.gamma, mu = problem.gas.mu;
  const Eigen::VectorXd p_hat = s.p.col(0);
  const EntryState st = entry_state(p_hat, bd.E0, bd.A0, bd.u1, bd.u2, problem);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p_hat.size());
  const EntryState bs = entry_state(zero, zero, zero, zero, zero, problem);

  const Eigen::ArrayXd u1 = bd.u1.array(), u2 = bd.u2.array();
  const Field d1u1 = column_d1(B, bd.u1), d2u1 = column_d2(B, bd.u1);
  const Field d1u2 = column_d1(B, bd.u2), d2u2 = column_d2(B, bd.u2);
  const Eigen::VectorXd div = d1u1.col(0) + d2u2.col(0);

  RobinTerms G;
  G.G1 = robin_G1(st.rho.matrix(), st.u0.matrix(), st.c2.matrix(), div);

  const Eigen::ArrayXd dp1 = column_d1(B, p_hat).col(0).array(), dp2 = column_d2(B, p_hat).col(0).array();
  const Eigen::ArrayXd dA1 = column_d1(B, bd.A0).col(0).array(), dA2 = column_d2(B, bd.A0).col(0).array();
  const Eigen::ArrayXd dE1 = column_d1(B, bd.E0).col(0).array(), dE2 = column_d2(B, bd.E0).col(0).array();
  const Eigen::ArrayXd u_grad_u1 = u1 * d1u1.col(0).array() + u2 * d2u1.col(0).array();
  const Eigen::ArrayXd u_grad_u2 = u1 * d1u2.col(0).array() + u2 * d2u2.col(0).array();
  const Eigen::ArrayXd den = st.u0sq / st.c2 - 1.0;
  const Eigen::ArrayXd bracket = st.u0 * (1.0 / st.c2 + 1.0 / st.u0sq) * (u1 * dp1 + u2 * dp2) +
                                 st.rho.pow(g) / ((g - 1.0) * st.u0) * (u1 * dA1 + u2 * dA2) +
                                 st.rho / st.u0 * (u1 * u_grad_u1 + u2 * u_grad_u2) -
                                 st.rho / st.u0 * (u1 * dE1 + u2 * dE2);
  G.G2 = (-bracket / den).matrix();

  const Eigen::ArrayXd robin = st.p * st.u0sq / (st.u0sq - st.c2) - bs.p * bs.u0sq / (bs.u0sq - bs.c2);
  G.G3 = (problem.coeffs.gamma0 * p_hat.array() + mu * g * robin).matrix();
  return G;
}

PerturbationState apply_T(const PerturbationState& s, const BoundaryData& bd, const DuctProblem& problem,
                          const IterationConfig& config) {
  const TangentialBasis& B = problem.basis;
  const double h = problem.spec.h();
  const char* stage = "reconstruct";
  try {
    const FlowFields U = reconstruct(s, problem);
    stage = "characteristics";
    const CharacteristicMap map = trace_characteristics(U.u0, U.u1, U.u2, B, h);

    PerturbationState out;
    stage = "entropy";
    out.A = solve_entropy(bd.A0, map, B);

    stage = "pressure";
    const Field H = assemble_H(s, problem);
    const Field rhs = assemble_F0(out.A, bd.E0, problem, map) + assemble_F_with(s, H, problem, map);
    const Eigen::VectorXd G = assemble_G(s, bd, problem).total();
    out.p = solve_nonlocal_elliptic(rhs, G, bd.p1, problem.coeffs, B, config.threshold_factor);

    stage = "bernoulli";
    out.E = solve_bernoulli(bd.E0, out.A, out.p, H, problem.profile, map, B);

    stage = "tangential-velocity";
    auto [v1, v2] = solve_tangential_velocity(U.rho, U.u0, out.p, bd.u1, bd.u2, map, B);
    out.u1 = std::move(v1);
    out.u2 = std::move(v2);
    return out;
  } catch (const std::exception& e) {
    std::throw_with_nested(StageError(stage, e.what()));
  }
}

EulerResidual perturbation_residual(const PerturbationState& s, const DuctProblem& problem) {
  const double h = problem.spec.h();
  EulerResidual r = euler_residual(reconstruct(s, problem), problem.gas, problem.basis, h);
  const EulerResidual rb = euler_residual(problem.base, problem.gas, problem.basis, h);
  for (int e = 0; e < 5; ++e) r.fields[e] -= rb.fields[e];
  r.norms = residual_norms(r.fields);
  return r;
}

std::string to_json(const ContractionReport& r) {
  nlohmann::ordered_json j;
  j["iters"] = r.iters;
  j["update_norms"] = r.update_norms;
  j["ratio_estimates"] = r.ratio_estimates;
  j["converged"] = r.converged;
  nlohmann::ordered_json res;
  for (int e = 0; e < 5; ++e) res[kEulerEquationNames[e]] = r.final_residuals.max[e];
  j["final_residuals"] = res;
  return j.dump(2);
}

FixedPointResult solve_fixed_point(const BoundaryData& bd, const DuctProblem& problem, const IterationConfig& config) {
  config.validate();
  const double h = problem.spec.h();
  const double tol = config.tolerance();
  FixedPointResult res{PerturbationState::zeros(problem.spec.n_points(), problem.spec.grid_n0), {}};
  ContractionReport& rep = res.report;
  int above_one = 0;
  for (int it = 1; it <= config.max_iters; ++it) {
    PerturbationState next = apply_T(res.state, bd, problem, config);
    const double d = discrete_norm(next - res.state, 2, problem.basis, h);
    if (!rep.update_norms.empty()) {
      const double ratio = rep.update_norms.back() > 0.0 ? d / rep.update_norms.back() : 0.0;
      rep.ratio_estimates.push_back(ratio);
      above_one = ratio >= 1.0 ? above_one + 1 : 0;
    }
    rep.update_norms.push_back(d);
    res.state = std::move(next);
    rep.iters = it;
    if (d < tol) {
      rep.converged = true;
      break;
    }
    if (above_one >= config.contraction_window || !std::isfinite(d))
      throw DivergenceError("fixed-point iteration diverges: update norm " + std::to_string(d) + " after " +
                                std::to_string(it) + " iterations",
                            rep);
  }
  rep.final_residuals = euler_residual(reconstruct(res.state, problem), problem.gas, problem.basis, h).norms;
  return res;
}

}  // namespace fanno
