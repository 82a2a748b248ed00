#include "fanno/gas.hpp"

#include "fanno/errors.hpp"

namespace fanno {

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw DomainError("gas: gamma must exceed 1");
  if (!(mu >= 0.0)) throw DomainError("gas: friction coefficient mu must be non-negative");
  if (!(c_v > 0.0) || !(k0 > 0.0) || !(R > 0.0))
    throw DomainError("gas: c_v, k0 and R must be positive");
}

double GasModel::entropy_from(double A) const {
  if (!(A > 0.0)) throw DomainError("gas: A(s) must be positive");
  return c_v * std::log(A / k0);
}

namespace {
void require_positive(const ThermoState& state) {
  if (!(state.p > 0.0)) throw DomainError("thermo: pressure must be positive");
  if (!(state.rho > 0.0)) throw DomainError("thermo: density must be positive");
}
}  // namespace

double sound_speed_sq(const ThermoState& state, const GasModel& gas) {
  require_positive(state);
  return gas.gamma * state.p / state.rho;
}

double mach_number(const ThermoState& state, const GasModel& gas) {
  return std::sqrt(state.speed_sq() / sound_speed_sq(state, gas));
}

double bernoulli_constant(const ThermoState& state, const GasModel& gas) {
  return 0.5 * state.speed_sq() + sound_speed_sq(state, gas) / (gas.gamma - 1.0);
}

double temperature(const ThermoState& state, const GasModel& gas) {
  require_positive(state);
  return state.p / (state.rho * gas.R);
}

double entropy_function(const ThermoState& state, const GasModel& gas) {
  require_positive(state);
  return state.p / std::pow(state.rho, gas.gamma);
}

double entropy(const ThermoState& state, const GasModel& gas) {
  return gas.entropy_from(entropy_function(state, gas));
}

}  // namespace fanno
