#include "fanno/s_condition.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

#include "fanno/fourier.hpp"
#include "fanno/parallel.hpp"

namespace fanno {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    default: return "inconclusive";
  }
}

SConditionReport check_s_condition(const EllipticCoefficients& coeffs, int mode_cut, double threshold_factor) {
  SConditionReport rep;
  rep.mu = coeffs.mu;
  rep.threshold = resonance_threshold(coeffs, threshold_factor);

  std::map<int, LogValue> by_k2;
  for (int m2 = 0; m2 <= mode_cut; ++m2)
    for (int m1 = 0; m1 <= mode_cut; ++m1) by_k2.emplace(m1 * m1 + m2 * m2, LogValue{});
  std::vector<int> keys;
  for (const auto& [k2, _] : by_k2) keys.push_back(k2);
  std::vector<LogValue> values(keys.size());
  parallel_for(static_cast<std::ptrdiff_t>(keys.size()),
               [&](std::ptrdiff_t i) { values[i] = ModeOperator(coeffs, keys[i]).vartheta(); });
  for (std::size_t i = 0; i < keys.size(); ++i) by_k2[keys[i]] = values[i];
  rep.scan_boundary_k2 = keys.empty() ? 0.0 : keys.back();

  bool any_bad = false;
  double min_log = INFINITY;
  const double log_threshold = std::log(rep.threshold);
  for (int m2 = 0; m2 <= mode_cut; ++m2) {
    for (int m1 = 0; m1 <= mode_cut; ++m1) {
      const LogValue v = by_k2[m1 * m1 + m2 * m2];
      for (int parity = 1; parity <= 4; ++parity) {
        if (!parity_active(parity, m1, m2)) continue;
        rep.modes.push_back(ModeVartheta{parity, m1, m2, v});
        ++rep.scanned_modes;
        if (std::isnan(v.log_abs)) {
          any_bad = true;
          continue;
        }
        if (v.log_abs < min_log) {
          min_log = v.log_abs;
          rep.worst_mode = {parity, m1, m2};
        }
      }
    }
  }
  rep.min_abs_vartheta = std::exp(min_log);
  if (any_bad)
    rep.verdict = Verdict::inconclusive;
  else
    rep.verdict = min_log > log_threshold ? Verdict::satisfied : Verdict::violated;
  return rep;
}

std::string to_json(const SConditionReport& report) {
  nlohmann::ordered_json j;
  j["mu"] = report.mu;
  j["scanned_modes"] = report.scanned_modes;
  j["min_abs_vartheta"] = report.min_abs_vartheta;
  j["verdict"] = to_string(report.verdict);
  j["worst_mode"] = {report.worst_mode[0], report.worst_mode[1], report.worst_mode[2]};
  j["threshold"] = report.threshold;
  j["scan_boundary_k2"] = report.scan_boundary_k2;
  return j.dump(2);
}

}  // namespace fanno
