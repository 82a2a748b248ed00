#pragma once

#include <array>

#include <Eigen/Dense>

#include "fanno/grid.hpp"

namespace fanno {

/// Weight of mode (m1, m2) in the cos/sin expansion: 1/4, 1/2 or 1.
double mode_weight(int m1, int m2);

/// Whether parity i (1..4) is a genuine basis function for (m1, m2).
/// i = 1: cos cos, 2: sin cos, 3: cos sin, 4: sin sin (in (m1 x^1, m2 x^2)).
bool parity_active(int parity, int m1, int m2);

/// Trigonometric basis on the N x N torus grid truncated at mode cut M.
/// Coefficients follow the 1/pi^2 integral normalization, so a field equals
/// sum_m lambda_m (c_1 cos cos + c_2 sin cos + c_3 cos sin + c_4 sin sin).
class TangentialBasis {
 public:
  TangentialBasis(int n_t, int mode_cut);
  explicit TangentialBasis(const DuctSpec& spec) : TangentialBasis(spec.grid_n_t, spec.mode_cut) {}

  int n_t() const { return n_; }
  int cut() const { return cut_; }
  int n_points() const { return n_ * n_; }
  int n_modes() const { return (cut_ + 1) * (cut_ + 1); }
  int mode_index(int m1, int m2) const { return m1 + (cut_ + 1) * m2; }

  /// Raw (unweighted) coefficients of one cross-section as a (2M+1)^2 block matrix:
  /// rows index cos(0..M), sin(1..M) in x^1, columns the same in x^2.
  Eigen::MatrixXd analyze_block(const Eigen::Ref<const Eigen::VectorXd>& column) const;
  Eigen::VectorXd synthesize_block(const Eigen::MatrixXd& block) const;
  /// Block with lambda weights folded in, ready for point evaluation.
  Eigen::MatrixXd interpolant(const Eigen::Ref<const Eigen::VectorXd>& column) const;
  /// Evaluates a weighted block at points (2 x P); points need not be reduced mod 2 pi.
  Eigen::VectorXd evaluate(const Eigen::MatrixXd& weighted_block, const Eigen::Matrix2Xd& points) const;
  /// Trig vector [cos(0 x) .. cos(M x), sin(x) .. sin(M x)] at each x (rows: modes).
  Eigen::MatrixXd trig_table(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  /// Spectral derivatives of every column of a field (full band of the grid).
  Field d1(const Field& f) const;
  Field d2(const Field& f) const;
  Field d11(const Field& f) const;
  Field d22(const Field& f) const;
  Field d12(const Field& f) const;
  Field laplacian(const Field& f) const { return d11(f) + d22(f); }

  /// Drops all content above the mode cut (analyze then synthesize).
  Field truncate(const Field& f) const;

  const Eigen::VectorXd& nodes() const { return nodes_; }

 private:
  Field apply_x1(const Eigen::MatrixXd& D, const Field& f) const;
  Field apply_x2(const Eigen::MatrixXd& D, const Field& f) const;

  int n_;
  int cut_;
  Eigen::VectorXd nodes_;
  Eigen::MatrixXd analysis_;   // (2M+1) x N, rows 2/N cos(m x_i), 2/N sin(m x_i)
  Eigen::MatrixXd synthesis_;  // N x (2M+1), cos(m x_i), sin(m x_i)
  Eigen::VectorXd lambda1_;    // 1/2 for m = 0, else 1 (cos rows); 1 for sin rows
  Eigen::MatrixXd D1_, D2_;
};

/// Scalar field on [0, L] x T^2 as per-mode coefficient functions of x^0.
/// coeff[i-1] is ((M+1)^2, n0), row m1 + (M+1) m2; inactive parities are zero rows.
struct FourierField {
  int cut = 0;
  std::array<Eigen::MatrixXd, 4> coeff;

  int n0() const { return static_cast<int>(coeff[0].cols()); }
  double& at(int parity, int m1, int m2, int j) { return coeff[parity - 1](m1 + (cut + 1) * m2, j); }
  double at(int parity, int m1, int m2, int j) const { return coeff[parity - 1](m1 + (cut + 1) * m2, j); }
};

FourierField analyze(const Field& field, const TangentialBasis& basis);
FourierField analyze(const Field& field, const DuctSpec& spec);
Field synthesize(const FourierField& modes, const TangentialBasis& basis);
Field synthesize(const FourierField& modes, const DuctSpec& spec);

/// Same for a single cross-section (boundary data on Sigma_0 or Sigma_1): returns a one-column field.
FourierField analyze_boundary(const Eigen::VectorXd& values, const TangentialBasis& basis);

}  // namespace fanno
