#include <gtest/gtest.h>

#include <json.hpp>

#include "fanno/s_condition.hpp"

using namespace fanno;

namespace {
EllipticCoefficients coeffs_for(double mu, int n_steps = 400) {
  const GasModel gas{1.4, mu, 1.0, 1.0, 1.0};
  return assemble_coefficients(integrate_background(0.5, ExitPressure{1.0, 0.0}, 3.0, gas, n_steps), gas);
}
}  // namespace

TEST(SCondition, FrictionlessIsSatisfied) {
  const SConditionReport r = check_s_condition(coeffs_for(0.0), 16);
  EXPECT_EQ(r.verdict, Verdict::satisfied);
  EXPECT_EQ(r.scanned_modes, 33 * 33);
  for (const auto& m : r.modes) EXPECT_EQ(m.vartheta.sign, 1);
}

TEST(SCondition, DependsOnlyOnWaveNumberMagnitude) {
  const SConditionReport r = check_s_condition(coeffs_for(0.07), 5);
  auto find = [&](int i, int a, int b) {
    for (const auto& m : r.modes)
      if (m.parity == i && m.m1 == a && m.m2 == b) return m.vartheta;
    return LogValue{};
  };
  const LogValue a = find(1, 3, 4), b = find(4, 4, 3), c = find(2, 5, 0), d = find(3, 0, 5);
  EXPECT_EQ(a.log_abs, b.log_abs);
  EXPECT_EQ(a.log_abs, c.log_abs);
  EXPECT_EQ(a.log_abs, d.log_abs);
}

TEST(SCondition, ThresholdOnlyMovesVerdict) {
  const EllipticCoefficients c = coeffs_for(0.05);
  const SConditionReport loose = check_s_condition(c, 4, 1e-8);
  const SConditionReport strict = check_s_condition(c, 4, 1e300);
  EXPECT_EQ(loose.verdict, Verdict::satisfied);
  EXPECT_EQ(strict.verdict, Verdict::violated);
  ASSERT_EQ(loose.modes.size(), strict.modes.size());
  for (std::size_t i = 0; i < loose.modes.size(); ++i)
    EXPECT_EQ(loose.modes[i].vartheta.log_abs, strict.modes[i].vartheta.log_abs);
  EXPECT_EQ(loose.min_abs_vartheta, strict.min_abs_vartheta);
}

TEST(SCondition, JsonLayout) {
  const auto j = nlohmann::json::parse(to_json(check_s_condition(coeffs_for(0.02), 3)));
  for (const char* key : {"mu", "scanned_modes", "min_abs_vartheta", "verdict", "worst_mode"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["worst_mode"].size(), 3u);
  EXPECT_EQ(j["verdict"], "satisfied");
  EXPECT_EQ(j["scanned_modes"], 49);
}
