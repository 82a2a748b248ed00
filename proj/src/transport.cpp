#include "fanno/transport.hpp"

#include <cmath>
#include <string>

#include "fanno/axial.hpp"
#include "fanno/coefficients.hpp"
#include "fanno/errors.hpp"
#include "fanno/parallel.hpp"

namespace fanno {

namespace {

constexpr int kInverseMaxIters = 100;
constexpr double kInverseTol = 1e-14;

Eigen::Matrix2Xd grid_points(const TangentialBasis& basis) {
  const int n = basis.n_t();
  Eigen::Matrix2Xd pts(2, n * n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) pts.col(i1 + n * i2) << basis.nodes()(i1), basis.nodes()(i2);
  return pts;
}

// Evaluates two weighted blocks at the same points, sharing the trig tables.
void evaluate_pair(const TangentialBasis& basis, const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                   const Eigen::Matrix2Xd& pts, Eigen::Matrix2Xd& out) {
  const Eigen::MatrixXd A = basis.trig_table(pts.row(0));
  const Eigen::MatrixXd B = basis.trig_table(pts.row(1));
  out.row(0) = A.cwiseProduct(w1 * B).colwise().sum();
  out.row(1) = A.cwiseProduct(w2 * B).colwise().sum();
}

void check_shape(const Field& f, const CharacteristicMap& map, const TangentialBasis& basis, const char* what) {
  if (f.rows() != basis.n_points() || f.cols() != map.n0())
    throw ShapeError(std::string(what) + ": field does not match the characteristic grid");
}

void check_profile(const BackgroundProfile& profile, const CharacteristicMap& map) {
  if (profile.size() != map.n0()) throw ShapeError("transport: background profile and grid differ in length");
}

// Evaluates column j of f (interpolated at the cut) at the given positions.
Field evaluate_columns(const Field& f, const Eigen::MatrixXd& x1, const Eigen::MatrixXd& x2,
                       const TangentialBasis& basis) {
  Field out(f.rows(), f.cols());
  parallel_for(f.cols(), [&](std::ptrdiff_t j) {
    Eigen::Matrix2Xd pts(2, f.rows());
    pts.row(0) = x1.col(j).transpose();
    pts.row(1) = x2.col(j).transpose();
    out.col(j) = basis.evaluate(basis.interpolant(f.col(j)), pts);
  });
  return out;
}

}  // namespace

CharacteristicMap identity_map(const TangentialBasis& basis, int n0, double h) {
  CharacteristicMap map;
  map.h = h;
  map.identity = true;
  const Eigen::Matrix2Xd pts = grid_points(basis);
  map.fwd1 = pts.row(0).transpose().replicate(1, n0);
  map.fwd2 = pts.row(1).transpose().replicate(1, n0);
  map.inv1 = map.fwd1;
  map.inv2 = map.fwd2;
  return map;
}

CharacteristicMap trace_characteristics(const Field& u0, const Field& u1, const Field& u2,
                                        const TangentialBasis& basis, double h, double delta) {
  if (u0.rows() != basis.n_points() || u1.rows() != u0.rows() || u2.rows() != u0.rows() ||
      u1.cols() != u0.cols() || u2.cols() != u0.cols())
    throw ShapeError("trace_characteristics: velocity components differ in shape");
  const int n0 = static_cast<int>(u0.cols());
  const double min_u0 = u0.minCoeff();
  if (!(min_u0 > delta)) throw DomainError("trace_characteristics: axial velocity degenerates (min u0 = " +
                                           std::to_string(min_u0) + ")");
  const double length = h * (n0 - 1);
  const double vsup = (u1.array().square() + u2.array().square()).sqrt().maxCoeff();

  if (u1.isZero(0.0) && u2.isZero(0.0)) {
    CharacteristicMap map = identity_map(basis, n0, h);
    map.min_u0 = min_u0;
    map.displacement_constant = length / min_u0;
    return map;
  }

  const Field v1 = u1.cwiseQuotient(u0);
  const Field v2 = u2.cwiseQuotient(u0);
  const int P = basis.n_points();
  const Eigen::Matrix2Xd seeds = grid_points(basis);

  CharacteristicMap map;
  map.h = h;
  map.min_u0 = min_u0;
  map.velocity_sup = vsup;
  map.displacement_constant = length / min_u0;
  map.fwd1.resize(P, n0);
  map.fwd2.resize(P, n0);
  map.fwd1.col(0) = seeds.row(0).transpose();
  map.fwd2.col(0) = seeds.row(1).transpose();

  double speed = 0.0;
  auto track = [&speed](const Eigen::Matrix2Xd& k) { speed = std::max(speed, k.colwise().norm().maxCoeff()); };

  Eigen::Matrix2Xd X = seeds, k1(2, P), k2(2, P), k3(2, P), k4(2, P);
  Eigen::MatrixXd a1 = basis.interpolant(v1.col(0)), a2 = basis.interpolant(v2.col(0));
  for (int j = 0; j + 1 < n0; ++j) {
    const Eigen::MatrixXd m1 = basis.interpolant(axial_midpoint(v1, j));
    const Eigen::MatrixXd m2 = basis.interpolant(axial_midpoint(v2, j));
    const Eigen::MatrixXd b1 = basis.interpolant(v1.col(j + 1));
    const Eigen::MatrixXd b2 = basis.interpolant(v2.col(j + 1));
    evaluate_pair(basis, a1, a2, X, k1);
    evaluate_pair(basis, m1, m2, X + 0.5 * h * k1, k2);
    evaluate_pair(basis, m1, m2, X + 0.5 * h * k2, k3);
    evaluate_pair(basis, b1, b2, X + h * k3, k4);
    track(k1);
    track(k2);
    track(k3);
    track(k4);
    X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    map.fwd1.col(j + 1) = X.row(0).transpose();
    map.fwd2.col(j + 1) = X.row(1).transpose();
    a1 = b1;
    a2 = b2;
  }
  map.traced_speed_sup = speed;

  // Inverse per slice: xbar = x' - d_j(xbar), d_j the interpolated seed displacement.
  map.inv1.resize(P, n0);
  map.inv2.resize(P, n0);
  Eigen::VectorXd disp(n0), resid(n0);
  parallel_for(n0, [&](std::ptrdiff_t j) {
    const Eigen::VectorXd d1 = map.fwd1.col(j) - seeds.row(0).transpose();
    const Eigen::VectorXd d2 = map.fwd2.col(j) - seeds.row(1).transpose();
    const Eigen::MatrixXd w1 = basis.interpolant(d1), w2 = basis.interpolant(d2);
    Eigen::Matrix2Xd Y = seeds, D(2, P);
    double change = INFINITY;
    for (int it = 0; it < kInverseMaxIters && change > kInverseTol; ++it) {
      evaluate_pair(basis, w1, w2, Y, D);
      const Eigen::Matrix2Xd next = seeds - D;
      change = (next - Y).cwiseAbs().maxCoeff();
      Y = next;
    }
    evaluate_pair(basis, w1, w2, Y, D);
    resid(j) = (Y + D - seeds).cwiseAbs().maxCoeff();
    disp(j) = (Y - seeds).colwise().norm().maxCoeff();
    map.inv1.col(j) = Y.row(0).transpose();
    map.inv2.col(j) = Y.row(1).transpose();
  });
  map.max_displacement = disp.maxCoeff();
  map.inverse_residual = resid.maxCoeff();
  if (!(map.inverse_residual < 1e-8))
    throw DomainError("trace_characteristics: cross-section map is not invertible (residual " +
                      std::to_string(map.inverse_residual) + ")");
  if (map.max_displacement > 1.01 * length * speed + 1e-12)
    throw DomainError("trace_characteristics: displacement exceeds L sup|u'/u0|");
  return map;
}

Field sample_along(const Field& f, const CharacteristicMap& map, const TangentialBasis& basis) {
  check_shape(f, map, basis, "sample_along");
  if (map.identity) return f;
  return evaluate_columns(f, map.fwd1, map.fwd2, basis);
}

Field pull_back(const Field& by_seed, const CharacteristicMap& map, const TangentialBasis& basis) {
  check_shape(by_seed, map, basis, "pull_back");
  if (map.identity) return by_seed;
  return evaluate_columns(by_seed, map.inv1, map.inv2, basis);
}

Field integrate_along(const Field& f_by_seed, double h) { return cumulative_integral(f_by_seed, h); }

Field solve_entropy(const Eigen::VectorXd& boundary, const CharacteristicMap& map, const TangentialBasis& basis) {
  if (boundary.size() != basis.n_points()) throw ShapeError("solve_entropy: boundary size does not match n_t^2");
  return pull_back(boundary.replicate(1, map.n0()), map, basis);
}

Field solve_bernoulli(const Eigen::VectorXd& E0_hat, const Field& A_hat, const Field& p_hat, const Field& H,
                      const BackgroundProfile& profile, const CharacteristicMap& map,
                      const TangentialBasis& basis) {
  check_shape(A_hat, map, basis, "solve_bernoulli");
  check_shape(p_hat, map, basis, "solve_bernoulli");
  check_shape(H, map, basis, "solve_bernoulli");
  check_profile(profile, map);
  if (E0_hat.size() != basis.n_points()) throw ShapeError("solve_bernoulli: boundary size does not match n_t^2");
  const double mu = profile.gas.mu, g = profile.gas.gamma;
  const int n0 = map.n0();
  Eigen::RowVectorXd grow(n0), wa(n0), wp(n0);
  for (int j = 0; j < n0; ++j) {
    const double x = j * map.h;
    grow(j) = std::exp(2.0 * mu * x);
    wa(j) = 2.0 * mu / (g - 1.0) * std::pow(profile.rho(j), g - 1.0);
    wp(j) = 2.0 * mu / profile.rho(j);
  }
  const Field S = A_hat * wa.asDiagonal() + p_hat * wp.asDiagonal() + H;
  Field by_seed = integrate_along(sample_along(S, map, basis) * grow.asDiagonal(), map.h);
  by_seed.colwise() += E0_hat;
  return pull_back(by_seed * grow.cwiseInverse().asDiagonal(), map, basis);
}

std::pair<Field, Field> solve_tangential_velocity(const Field& rho, const Field& u0, const Field& p,
                                                  const Eigen::VectorXd& u1_entry, const Eigen::VectorXd& u2_entry,
                                                  const CharacteristicMap& map, const TangentialBasis& basis) {
  check_shape(rho, map, basis, "solve_tangential_velocity");
  check_shape(u0, map, basis, "solve_tangential_velocity");
  check_shape(p, map, basis, "solve_tangential_velocity");
  if (u1_entry.size() != basis.n_points() || u2_entry.size() != basis.n_points())
    throw ShapeError("solve_tangential_velocity: boundary size does not match n_t^2");
  if (!(u0.minCoeff() > 0.0)) throw DomainError("solve_tangential_velocity: axial velocity degenerates");
  const Field inv = rho.cwiseProduct(u0).cwiseInverse();
  Field w1 = integrate_along(sample_along(basis.d1(p).cwiseProduct(inv), map, basis), map.h);
  Field w2 = integrate_along(sample_along(basis.d2(p).cwiseProduct(inv), map, basis), map.h);
  w1 = (-w1).colwise() + u1_entry;
  w2 = (-w2).colwise() + u2_entry;
  return {pull_back(w1, map, basis), pull_back(w2, map, basis)};
}

Field solve_f6_correction(const Field& p_hat, const Field& H, const BackgroundProfile& profile,
                          const CharacteristicMap& map, const TangentialBasis& basis) {
  check_shape(p_hat, map, basis, "solve_f6_correction");
  check_shape(H, map, basis, "solve_f6_correction");
  check_profile(profile, map);
  const double mu = profile.gas.mu, g = profile.gas.gamma;
  const int n0 = map.n0();
  Eigen::RowVectorXd grow(n0), wp(n0), outer(n0);
  for (int j = 0; j < n0; ++j) {
    const double x = j * map.h;
    grow(j) = std::exp(2.0 * mu * x);
    wp(j) = grow(j) * 2.0 * mu / profile.rho(j);
    outer(j) = -mu * mu * profile.rho(j) * d3(profile.t(j), g) / grow(j);
  }
  const Field along = integrate_along(sample_along(p_hat, map, basis) * wp.asDiagonal() +
                                          sample_along(H, map, basis) * grow.asDiagonal(),
                                      map.h);
  const Field axial = cumulative_integral(Field(p_hat * wp.asDiagonal()), map.h);
  return (pull_back(along, map, basis) - axial) * outer.asDiagonal();
}

}  // namespace fanno
