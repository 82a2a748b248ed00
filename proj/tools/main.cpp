#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fanno/iteration.hpp"
#include "fanno/parallel.hpp"

namespace {

void print_nested(const std::exception& e, int depth = 0) {
  std::cerr << std::string(2 * depth, ' ') << e.what() << '\n';
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_nested(inner, depth + 1);
  } catch (...) {
  }
}

const fanno::DivergenceError* find_divergence(const std::exception& e) {
  if (auto* d = dynamic_cast<const fanno::DivergenceError*>(&e)) return d;
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return find_divergence(inner);
  } catch (...) {
  }
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fanno::cli;

  CLI::App app{"Perturbed Fanno flow in a duct: background profiles, S-Condition checks and the nonlinear solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "csv", mu_sweep, eps_sweep;
  int threads = 0;
  std::optional<double> threshold;
  bool skip_s_check = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };

  struct Entry {
    const char* name;
    const char* help;
    Outputs (*run)(const RunConfig&, const CommandOptions&);
  };
  const Entry entries[] = {
      {"background", "subsonic Fanno profile and its invariants", cmd_background},
      {"supersonic", "supersonic Fanno profile anchored at the entry", cmd_supersonic},
      {"shock", "transonic shock: supersonic, normal shock, subsonic", cmd_shock},
      {"s-condition", "checks the S-Condition for every retained Fourier mode", cmd_s_condition},
      {"solve", "solves the perturbed subsonic problem by fixed-point iteration", cmd_solve},
      {"residual", "Euler residual refinement study of the nonlinear solution", cmd_residual},
      {"sweep", "friction or amplitude sweep", cmd_sweep},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    const std::string name = e.name;
    if (name == "s-condition" || name == "solve" || name == "residual" || name == "sweep")
      sub->add_option("--threshold", threshold, "resonance threshold factor")->check(CLI::PositiveNumber);
    if (name == "s-condition" || name == "sweep")
      sub->add_option("--mu-sweep", mu_sweep, "friction values: a,b,c or min:max:count");
    if (name == "solve" || name == "sweep")
      sub->add_option("--eps-sweep", eps_sweep, "boundary amplitudes: a,b,c or min:max:count");
    if (name == "solve" || name == "residual" || name == "sweep")
      sub->add_flag("--skip-s-check", skip_s_check, "solve even when the S-Condition check fails");
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (threads > 0) fanno::set_thread_count(threads);
    CommandOptions opt;
    opt.format = format == "json" ? Format::json : Format::csv;
    opt.threshold = threshold;
    opt.skip_s_check = skip_s_check;
    if (!mu_sweep.empty()) opt.mu_sweep = parse_value_list(mu_sweep);
    if (!eps_sweep.empty()) opt.eps_sweep = parse_value_list(eps_sweep);
    const RunConfig cfg = load_config(config_path);
    for (const auto& [sub, entry] : subs) {
      if (!sub->parsed()) continue;
      write_outputs(out_dir, entry->run(cfg, opt));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: ";
    print_nested(e);
    if (const auto* d = find_divergence(e)) std::cerr << to_json(d->report()) << '\n';
    return exit_code_for(e);
  }
  return 0;
}
