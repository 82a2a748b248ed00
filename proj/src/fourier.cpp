#include "fanno/fourier.hpp"

#include <cmath>
#include <numbers>

#include "fanno/errors.hpp"

namespace fanno {

double mode_weight(int m1, int m2) {
  if (m1 == 0 && m2 == 0) return 0.25;
  if (m1 == 0 || m2 == 0) return 0.5;
  return 1.0;
}

bool parity_active(int parity, int m1, int m2) {
  switch (parity) {
    case 1: return true;
    case 2: return m1 > 0;
    case 3: return m2 > 0;
    case 4: return m1 > 0 && m2 > 0;
    default: return false;
  }
}

TangentialBasis::TangentialBasis(int n_t, int mode_cut) : n_(n_t) {
  if (n_t < 4 || (n_t & (n_t - 1)) != 0) throw ShapeError("basis: n_t must be a power of two >= 4");
  if (mode_cut < 0) throw ShapeError("basis: negative mode cut");
  cut_ = std::min(mode_cut, n_t / 2 - 1);
  const int M = cut_;
  const double pi = std::numbers::pi;
  const double dx = 2.0 * pi / n_;
  nodes_.resize(n_);
  for (int i = 0; i < n_; ++i) nodes_(i) = dx * i;

  synthesis_ = trig_table(nodes_.transpose()).transpose();
  analysis_ = (2.0 / n_) * synthesis_.transpose();
  lambda1_ = Eigen::VectorXd::Ones(2 * M + 1);
  lambda1_(0) = 0.5;

  D1_.resize(n_, n_);
  D2_.resize(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      if (i == j) {
        D1_(i, j) = 0.0;
        D2_(i, j) = -pi * pi / (3.0 * dx * dx) - 1.0 / 6.0;
      } else {
        const int k = i - j;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * k * dx;
        D1_(i, j) = 0.5 * sign / std::tan(half);
        D2_(i, j) = -0.5 * sign / (std::sin(half) * std::sin(half));
      }
    }
  }
}

Eigen::MatrixXd TangentialBasis::trig_table(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  const int M = cut_;
  const Eigen::Index P = x.size();
  Eigen::MatrixXd T(2 * M + 1, P);
  T.row(0).setOnes();
  if (M == 0) return T;
  const Eigen::RowVectorXd c1 = x.array().cos();
  const Eigen::RowVectorXd s1 = x.array().sin();
  T.row(1) = c1;
  T.row(M + 1) = s1;
  for (int m = 2; m <= M; ++m) {
    // cos(mx) = 2 cos x cos((m-1)x) - cos((m-2)x); sin likewise with sin(0) = 0.
    T.row(m) = 2.0 * c1.cwiseProduct(T.row(m - 1)) - T.row(m - 2);
    const Eigen::RowVectorXd prev2 = (m == 2) ? Eigen::RowVectorXd::Zero(P) : Eigen::RowVectorXd(T.row(M + m - 2));
    T.row(M + m) = 2.0 * c1.cwiseProduct(T.row(M + m - 1)) - prev2;
  }
  return T;
}

Eigen::MatrixXd TangentialBasis::analyze_block(const Eigen::Ref<const Eigen::VectorXd>& column) const {
  if (column.size() != n_ * n_) throw ShapeError("analyze: cross-section size does not match n_t^2");
  Eigen::Map<const Eigen::MatrixXd> F(column.data(), n_, n_);
  return analysis_ * F * analysis_.transpose();
}

Eigen::MatrixXd TangentialBasis::interpolant(const Eigen::Ref<const Eigen::VectorXd>& column) const {
  return lambda1_.asDiagonal() * analyze_block(column) * lambda1_.asDiagonal();
}

Eigen::VectorXd TangentialBasis::synthesize_block(const Eigen::MatrixXd& block) const {
  Eigen::MatrixXd F = synthesis_ * (lambda1_.asDiagonal() * block * lambda1_.asDiagonal()) * synthesis_.transpose();
  return Eigen::Map<Eigen::VectorXd>(F.data(), F.size());
}

Eigen::VectorXd TangentialBasis::evaluate(const Eigen::MatrixXd& weighted_block,
                                          const Eigen::Matrix2Xd& points) const {
  const Eigen::MatrixXd A = trig_table(points.row(0));
  const Eigen::MatrixXd B = trig_table(points.row(1));
  return (A.cwiseProduct(weighted_block * B)).colwise().sum().transpose();
}

Field TangentialBasis::apply_x1(const Eigen::MatrixXd& D, const Field& f) const {
  if (f.rows() != n_ * n_) throw ShapeError("derivative: field rows do not match n_t^2");
  Field out(f.rows(), f.cols());
  Eigen::Map<const Eigen::MatrixXd> in(f.data(), n_, n_ * f.cols());
  Eigen::Map<Eigen::MatrixXd> res(out.data(), n_, n_ * f.cols());
  res.noalias() = D * in;
  return out;
}

Field TangentialBasis::apply_x2(const Eigen::MatrixXd& D, const Field& f) const {
  if (f.rows() != n_ * n_) throw ShapeError("derivative: field rows do not match n_t^2");
  Field out(f.rows(), f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    Eigen::Map<const Eigen::MatrixXd> in(f.col(j).data(), n_, n_);
    Eigen::Map<Eigen::MatrixXd> res(out.col(j).data(), n_, n_);
    res.noalias() = in * D.transpose();
  }
  return out;
}

Field TangentialBasis::d1(const Field& f) const { return apply_x1(D1_, f); }
Field TangentialBasis::d2(const Field& f) const { return apply_x2(D1_, f); }
Field TangentialBasis::d11(const Field& f) const { return apply_x1(D2_, f); }
Field TangentialBasis::d22(const Field& f) const { return apply_x2(D2_, f); }
Field TangentialBasis::d12(const Field& f) const { return apply_x2(D1_, apply_x1(D1_, f)); }

Field TangentialBasis::truncate(const Field& f) const {
  Field out(f.rows(), f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) out.col(j) = synthesize_block(analyze_block(f.col(j)));
  return out;
}

namespace {

void scatter_block(const Eigen::MatrixXd& K, int M, FourierField& out, int j) {
  for (int m2 = 0; m2 <= M; ++m2) {
    for (int m1 = 0; m1 <= M; ++m1) {
      const int r = m1 + (M + 1) * m2;
      out.coeff[0](r, j) = K(m1, m2);
      out.coeff[1](r, j) = m1 > 0 ? K(M + m1, m2) : 0.0;
      out.coeff[2](r, j) = m2 > 0 ? K(m1, M + m2) : 0.0;
      out.coeff[3](r, j) = (m1 > 0 && m2 > 0) ? K(M + m1, M + m2) : 0.0;
    }
  }
}

Eigen::MatrixXd gather_block(const FourierField& in, int M, int j) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * M + 1, 2 * M + 1);
  for (int m2 = 0; m2 <= M; ++m2) {
    for (int m1 = 0; m1 <= M; ++m1) {
      const int r = m1 + (M + 1) * m2;
      K(m1, m2) = in.coeff[0](r, j);
      if (m1 > 0) K(M + m1, m2) = in.coeff[1](r, j);
      if (m2 > 0) K(m1, M + m2) = in.coeff[2](r, j);
      if (m1 > 0 && m2 > 0) K(M + m1, M + m2) = in.coeff[3](r, j);
    }
  }
  return K;
}

}  // namespace

FourierField analyze(const Field& field, const TangentialBasis& basis) {
  if (field.rows() != basis.n_points()) throw ShapeError("analyze: grid shape mismatch");
  FourierField out;
  out.cut = basis.cut();
  for (auto& c : out.coeff) c = Eigen::MatrixXd::Zero(basis.n_modes(), field.cols());
  for (Eigen::Index j = 0; j < field.cols(); ++j)
    scatter_block(basis.analyze_block(field.col(j)), basis.cut(), out, static_cast<int>(j));
  return out;
}

FourierField analyze(const Field& field, const DuctSpec& spec) {
  spec.validate();
  if (field.cols() != spec.grid_n0) throw ShapeError("analyze: axial sample count mismatch");
  return analyze(field, TangentialBasis(spec));
}

FourierField analyze_boundary(const Eigen::VectorXd& values, const TangentialBasis& basis) {
  return analyze(Field(values), basis);
}

Field synthesize(const FourierField& modes, const TangentialBasis& basis) {
  if (modes.cut != basis.cut()) throw ShapeError("synthesize: mode cut mismatch");
  for (const auto& c : modes.coeff)
    if (c.rows() != basis.n_modes() || c.cols() != modes.n0()) throw ShapeError("synthesize: coefficient shape mismatch");
  Field out(basis.n_points(), modes.n0());
  for (int j = 0; j < modes.n0(); ++j) out.col(j) = basis.synthesize_block(gather_block(modes, basis.cut(), j));
  return out;
}

Field synthesize(const FourierField& modes, const DuctSpec& spec) {
  spec.validate();
  return synthesize(modes, TangentialBasis(spec));
}

}  // namespace fanno
