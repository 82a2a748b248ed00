#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanno/fourier.hpp"
#include "fanno/gas.hpp"
#include "fanno/grid.hpp"

namespace fanno::cli {

inline constexpr int kConfigSchema = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One term c * trig1(m1 x1) * trig2(m2 x2) with parity 1..4 as in the Fourier basis.
struct TrigTerm {
  double c = 0.0;
  int parity = 1;
  int m1 = 0;
  int m2 = 0;
};

/// Parses sums like "1e-3*cos(2*x1)*sin(x2) - 0.5*cos(x1) + 0.1".
std::vector<TrigTerm> parse_trig_expression(const std::string& text);
/// Samples the terms on the n_t x n_t torus grid (row index i1 + n_t i2).
Eigen::VectorXd sample_terms(const std::vector<TrigTerm>& terms, const TangentialBasis& basis);

struct FlowConfig {
  double M0 = 0.5;
  std::optional<double> p_exit;
  std::optional<double> p_entry;
  double s_entry = 0.0;
  std::optional<double> shock_position;
};

struct NumericsConfig {
  double eps = 1.0;
  int max_iters = 50;
  double tol_update = 0.0;
  int contraction_window = 3;
  double threshold_factor = 1e-8;
  double K = 1.0;
};

/// Boundary deviations from the background traces, as shapes multiplied by numerics.eps.
/// s0 is an entropy deviation; it enters the solver through A(s).
struct BoundaryConfig {
  std::vector<TrigTerm> E0, s0, u1, u2, p1;
};

struct SweepConfig {
  std::vector<double> mu;
  std::vector<double> eps;
};

struct RunConfig {
  GasModel gas;
  FlowConfig flow;
  DuctSpec duct;
  BoundaryConfig boundary;
  NumericsConfig numerics;
  SweepConfig sweep;

  int n_steps() const { return duct.grid_n0 - 1; }
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// mu values: either an explicit list or {"min", "max", "count"} (uniform, both ends included).
std::vector<double> parse_grid(const nlohmann::json& node, const char* what);

}  // namespace fanno::cli
