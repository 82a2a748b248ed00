#pragma once

#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "fanno/iteration.hpp"

namespace fanno::cli {

enum class Format { csv, json };

/// Files produced by a command, written only after the whole command succeeded.
using Outputs = std::vector<std::pair<std::string, std::string>>;

struct CommandOptions {
  Format format = Format::csv;
  std::optional<double> threshold;
  bool skip_s_check = false;
  std::vector<double> mu_sweep;
  std::vector<double> eps_sweep;
};

Outputs cmd_background(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_supersonic(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_shock(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_s_condition(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_solve(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_residual(const RunConfig& cfg, const CommandOptions& opt);
Outputs cmd_sweep(const RunConfig& cfg, const CommandOptions& opt);

/// Boundary deviations sampled on the duct grid and scaled by eps.
BoundaryData make_boundary(const RunConfig& cfg, const DuctProblem& problem, double eps);

/// Parses "a,b,c" or "min:max:count".
std::vector<double> parse_value_list(const std::string& text);

/// 0 success, 2 choking, 3 regime, 4 divergence, 64 configuration, 1 anything else.
int exit_code_for(const std::exception& e);

/// Writes every file to a temporary name first and renames once all writes succeeded.
void write_outputs(const std::string& dir, const Outputs& outputs);

}  // namespace fanno::cli
