#include "fanno/nonlocal_elliptic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "fanno/axial.hpp"
#include "fanno/errors.hpp"
#include "fanno/mode_bvp.hpp"
#include "fanno/norms.hpp"
#include "fanno/parallel.hpp"

namespace fanno {

Field apply_operator(const Field& p_hat, const EllipticCoefficients& coeffs, const TangentialBasis& basis) {
  const auto& c = coeffs.nodes;
  if (p_hat.cols() != c.size() || p_hat.rows() != basis.n_points()) throw ShapeError("apply_operator: grid shape mismatch");
  const double h = coeffs.h();
  const Field integral = cumulative_integral(Field(p_hat * c.b.asDiagonal()), h);
  return axial_dd(p_hat, h) * c.e1.asDiagonal() - basis.laplacian(p_hat) + axial_d(p_hat, h) * c.e2.asDiagonal() +
         p_hat * c.e3.asDiagonal() + integral * c.e4.asDiagonal();
}

FourierField solve_nonlocal_elliptic_modes(const Field& h, const Eigen::VectorXd& g0, const Eigen::VectorXd& g1,
                                           const EllipticCoefficients& coeffs, const TangentialBasis& basis,
                                           double threshold_factor) {
  const Eigen::Index n0 = coeffs.x0.size();
  if (h.cols() != n0 || h.rows() != basis.n_points()) throw ShapeError("elliptic solve: source shape mismatch");
  if (g0.size() != basis.n_points() || g1.size() != basis.n_points())
    throw ShapeError("elliptic solve: boundary data shape mismatch");

  const FourierField hm = analyze(h, basis);
  const FourierField g0m = analyze_boundary(g0, basis);
  const FourierField g1m = analyze_boundary(g1, basis);
  const int M = basis.cut();

  struct Task {
    int parity, m1, m2, k2;
  };
  std::vector<Task> tasks;
  std::map<int, std::size_t> k2_slot;
  for (int parity = 1; parity <= 4; ++parity)
    for (int m2 = 0; m2 <= M; ++m2)
      for (int m1 = 0; m1 <= M; ++m1)
        if (parity_active(parity, m1, m2)) {
          const int k2 = m1 * m1 + m2 * m2;
          tasks.push_back({parity, m1, m2, k2});
          k2_slot.emplace(k2, 0);
        }
  std::vector<int> k2s;
  for (auto& [k2, slot] : k2_slot) {
    slot = k2s.size();
    k2s.push_back(k2);
  }
  std::vector<std::unique_ptr<ModeOperator>> ops(k2s.size());
  parallel_for(static_cast<std::ptrdiff_t>(k2s.size()),
               [&](std::ptrdiff_t i) { ops[i] = std::make_unique<ModeOperator>(coeffs, k2s[i]); });

  const double threshold = resonance_threshold(coeffs, threshold_factor);
  std::vector<LogValue> theta(k2s.size());
  parallel_for(static_cast<std::ptrdiff_t>(k2s.size()), [&](std::ptrdiff_t i) { theta[i] = ops[i]->vartheta(); });
  for (const Task& t : tasks) {
    const LogValue v = theta[k2_slot.at(t.k2)];
    if (!(v.log_abs >= std::log(threshold)))
      throw NearResonanceError("elliptic solve: mode (" + std::to_string(t.parity) + ", " + std::to_string(t.m1) +
                                   ", " + std::to_string(t.m2) + ") is near resonance",
                               t.parity, t.m1, t.m2, v.value());
  }
  const double b0 = coeffs.nodes.b(0);
  FourierField out;
  out.cut = M;
  for (auto& c : out.coeff) c = Eigen::MatrixXd::Zero(basis.n_modes(), n0);
  std::vector<std::optional<NearResonanceError>> errors(tasks.size());
  parallel_for(static_cast<std::ptrdiff_t>(tasks.size()), [&](std::ptrdiff_t i) {
    const Task& t = tasks[i];
    const int row = basis.mode_index(t.m1, t.m2);
    const Eigen::VectorXd rhs = hm.coeff[t.parity - 1].row(row).transpose();
    const double robin = b0 * g0m.coeff[t.parity - 1](row, 0);
    const double dirichlet = g1m.coeff[t.parity - 1](row, 0);
    if (rhs.isZero(0.0) && robin == 0.0 && dirichlet == 0.0) return;
    try {
      const ModeSolution sol = ops[k2_slot.at(t.k2)]->solve(rhs, robin, dirichlet, threshold, t.parity, t.m1, t.m2);
      out.coeff[t.parity - 1].row(row) = sol.p.transpose();
    } catch (const NearResonanceError& e) {
      errors[i] = e;
    }
  });
  for (const auto& e : errors)
    if (e) throw *e;
  return out;
}

Field solve_nonlocal_elliptic(const Field& h, const Eigen::VectorXd& g0, const Eigen::VectorXd& g1,
                              const EllipticCoefficients& coeffs, const TangentialBasis& basis,
                              double threshold_factor) {
  return synthesize(solve_nonlocal_elliptic_modes(h, g0, g1, coeffs, basis, threshold_factor), basis);
}

double apriori_bound_check(const Field& solution, const Field& h, const Eigen::VectorXd& g0,
                           const Eigen::VectorXd& g1, const TangentialBasis& basis, double h_axial, int k) {
  const double data = field_norm(h, k - 2, basis, h_axial) + boundary_norm(g0, k - 1, basis) +
                      boundary_norm(g1, k, basis);
  const double sol = field_norm(solution, k, basis, h_axial);
  if (data == 0.0) {
    if (sol == 0.0) return 0.0;
    throw std::logic_error("apriori_bound_check: nonzero solution for zero data (solver defect)");
  }
  return sol / data;
}

}  // namespace fanno
