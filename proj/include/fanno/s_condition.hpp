#pragma once

#include <array>
#include <string>
#include <vector>

#include "fanno/coefficients.hpp"
#include "fanno/mode_bvp.hpp"

namespace fanno {

enum class Verdict { satisfied, violated, inconclusive };
std::string to_string(Verdict v);

struct ModeVartheta {
  int parity, m1, m2;
  LogValue vartheta;
};

struct SConditionReport {
  double mu = 0.0;
  int scanned_modes = 0;
  double min_abs_vartheta = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::array<int, 3> worst_mode{1, 0, 0};
  /// Largest |m|^2 that was integrated; beyond it the |m|^2 / b term dominates and
  /// the homogeneous solution grows monotonically (heuristic, not a proof).
  double scan_boundary_k2 = 0.0;
  std::vector<ModeVartheta> modes;
};

/// Integrates the homogeneous Cauchy problem for every (i, m) with 0 <= m1, m2 <= mode_cut
/// (one integration per distinct |m|^2) and compares |W'(L)| against the resonance threshold.
SConditionReport check_s_condition(const EllipticCoefficients& coeffs, int mode_cut, double threshold_factor = 1e-8);

/// {"mu", "scanned_modes", "min_abs_vartheta", "verdict", "worst_mode", "threshold", "scan_boundary_k2"}.
std::string to_json(const SConditionReport& report);

}  // namespace fanno
