#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fanno/errors.hpp"
#include "fanno/norms.hpp"
#include "fanno/s_condition.hpp"

namespace fanno::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ThermoAnchor subsonic_anchor(const RunConfig& cfg) {
  if (cfg.flow.p_entry) return EntryPressure{*cfg.flow.p_entry, cfg.flow.s_entry};
  return ExitPressure{cfg.flow.p_exit.value_or(1.0), cfg.flow.s_entry};
}

ThermoAnchor supersonic_anchor(const RunConfig& cfg) {
  if (cfg.flow.p_exit) throw ConfigError("supersonic profiles are anchored by flow.p_entry");
  return EntryPressure{cfg.flow.p_entry.value_or(1.0), cfg.flow.s_entry};
}

std::string profile_json(const BackgroundProfile& p) {
  ojson j;
  auto col = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  j["x0"] = col(p.x0);
  j["p"] = col(p.p);
  j["rho"] = col(p.rho);
  j["u"] = col(p.u);
  j["E"] = col(p.E);
  j["s"] = col(p.s);
  j["M"] = col(p.M);
  Eigen::VectorXd theta(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) theta(k) = p.theta(k);
  j["theta"] = col(theta);
  return j.dump(2);
}

ojson invariants(const BackgroundProfile& p) {
  const GasModel& g = p.gas;
  const double j0 = p.rho(0) * p.u(0);
  double mass = 0.0, entropy = 0.0, implicit = 0.0;
  const double c0 = 1.0 / (p.M(0) * p.M(0)) + std::log(p.M(0) * p.M(0));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    mass = std::max(mass, std::abs(p.rho(k) * p.u(k) - j0) / std::abs(j0));
    entropy = std::max(entropy, std::abs(p.s(k) - p.s(0)));
    const double t = p.M(k) * p.M(k);
    implicit = std::max(implicit, std::abs(1.0 / t + std::log(t) - (c0 - g.mu * (g.gamma + 1.0) * (p.x0(k) - p.x0(0)))));
  }
  ojson j;
  const auto L = max_length(p.M_entry, g);
  j["L_M0"] = L ? ojson(*L) : ojson(nullptr);
  j["length"] = p.length;
  j["n_steps"] = p.size() - 1;
  j["M_entry"] = p.M(0);
  j["M_exit"] = p.M(p.size() - 1);
  j["mass_flux_drift"] = mass;
  j["entropy_drift"] = entropy;
  j["implicit_relation_drift"] = implicit;
  return j;
}

Outputs profile_outputs(const BackgroundProfile& p, const CommandOptions& opt, const std::string& stem) {
  Outputs out;
  if (opt.format == Format::json)
    out.emplace_back(stem + ".json", profile_json(p));
  else
    out.emplace_back(stem + ".csv", profile_csv(p));
  return out;
}

double threshold_factor(const RunConfig& cfg, const CommandOptions& opt) {
  return opt.threshold.value_or(cfg.numerics.threshold_factor);
}

IterationConfig iteration_config(const RunConfig& cfg, double eps) {
  IterationConfig it;
  it.eps = eps;
  it.K = cfg.numerics.K;
  it.max_iters = cfg.numerics.max_iters;
  it.tol_update = cfg.numerics.tol_update;
  it.contraction_window = cfg.numerics.contraction_window;
  it.threshold_factor = cfg.numerics.threshold_factor;
  return it;
}

DuctProblem build_problem(const RunConfig& cfg) {
  if (!(cfg.flow.M0 < 1.0)) throw RegimeError("the perturbation solver needs a subsonic background (M0 < 1)");
  return make_problem(cfg.gas, cfg.flow.M0, subsonic_anchor(cfg), cfg.duct);
}

void require_s_condition(const DuctProblem& pr, const RunConfig& cfg, const CommandOptions& opt) {
  if (opt.skip_s_check) return;
  const SConditionReport r = check_s_condition(pr.coeffs, pr.basis.cut(), threshold_factor(cfg, opt));
  if (r.verdict != Verdict::satisfied)
    throw RegimeError("S-Condition not satisfied (min |vartheta| = " + num(r.min_abs_vartheta) + ", mode [" +
                      std::to_string(r.worst_mode[0]) + "," + std::to_string(r.worst_mode[1]) + "," +
                      std::to_string(r.worst_mode[2]) + "])");
}

ojson norms_json(const EulerResidualNorms& n) {
  ojson j;
  for (int e = 0; e < 5; ++e) j[kEulerEquationNames[e]] = {{"max", n.max[e]}, {"l2", n.l2[e]}};
  return j;
}

struct FieldRef {
  const char* name;
  const Field* field;
};

Outputs field_outputs(const PerturbationState& s, const DuctProblem& pr, Format format) {
  const std::vector<FieldRef> fields{{"p_hat", &s.p}, {"E_hat", &s.E}, {"A_hat", &s.A}, {"u1", &s.u1}, {"u2", &s.u2}};
  const int n = pr.basis.n_t();
  const Eigen::Index n0 = s.p.cols();
  Outputs out;
  if (format == Format::json) {
    ojson j;
    j["layout"] = "value[j][i1 + n_t * i2] at (x0[j], x1[i1], x2[i2])";
    j["x0"] = std::vector<double>(pr.coeffs.x0.data(), pr.coeffs.x0.data() + n0);
    j["x1"] = std::vector<double>(pr.basis.nodes().data(), pr.basis.nodes().data() + n);
    j["x2"] = j["x1"];
    for (const FieldRef& f : fields) {
      ojson cols = ojson::array();
      for (Eigen::Index c = 0; c < n0; ++c)
        cols.push_back(std::vector<double>(f.field->col(c).data(), f.field->col(c).data() + f.field->rows()));
      j[f.name] = std::move(cols);
    }
    out.emplace_back("fields.json", j.dump());
    return out;
  }
  for (const FieldRef& f : fields) {
    std::string text = "x0,x1,x2,value\n";
    text.reserve(static_cast<std::size_t>(n0) * n * n * 80);
    for (Eigen::Index c = 0; c < n0; ++c) {
      const std::string x0 = num(pr.coeffs.x0(c));
      for (int i2 = 0; i2 < n; ++i2)
        for (int i1 = 0; i1 < n; ++i1) {
          text += x0;
          text += ',';
          text += num(pr.basis.nodes()(i1));
          text += ',';
          text += num(pr.basis.nodes()(i2));
          text += ',';
          text += num((*f.field)(i1 + n * i2, c));
          text += '\n';
        }
    }
    out.emplace_back(std::string(f.name) + ".csv", std::move(text));
  }
  return out;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) continue;
    const double a = std::log(x[k]), b = std::log(y[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++n;
  }
  if (n < 2) return NAN;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outputs mu_sweep(const RunConfig& cfg, const CommandOptions& opt, const std::vector<double>& mus) {
  Outputs out;
  std::string table = "mu,min_abs_vartheta,verdict,worst_i,worst_m1,worst_m2\n";
  std::vector<bool> below;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    RunConfig c = cfg;
    c.gas.mu = mus[k];
    const DuctProblem pr = build_problem(c);
    const SConditionReport r = check_s_condition(pr.coeffs, pr.basis.cut(), threshold_factor(cfg, opt));
    char name[48];
    std::snprintf(name, sizeof name, "s_condition_mu_%03zu.json", k);
    out.emplace_back(name, to_json(r));
    table += num(mus[k]) + "," + num(r.min_abs_vartheta) + "," + to_string(r.verdict) + "," +
             std::to_string(r.worst_mode[0]) + "," + std::to_string(r.worst_mode[1]) + "," +
             std::to_string(r.worst_mode[2]) + "\n";
    below.push_back(r.verdict != Verdict::satisfied);
  }
  ojson intervals = ojson::array();
  for (std::size_t k = 0; k < below.size();) {
    if (!below[k]) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < below.size() && below[e + 1]) ++e;
    intervals.push_back({{"mu_first", mus[k]}, {"mu_last", mus[e]}, {"points", e - k + 1}});
    k = e + 1;
  }
  ojson summary;
  summary["points"] = mus.size();
  summary["sub_threshold_intervals"] = intervals.size();
  summary["intervals"] = intervals;
  out.emplace_back("s_condition_sweep.csv", table);
  out.emplace_back("s_condition_sweep.json", summary.dump(2));
  return out;
}

Outputs eps_sweep(const RunConfig& cfg, const CommandOptions& opt, const std::vector<double>& eps) {
  const DuctProblem pr = build_problem(cfg);
  require_s_condition(pr, cfg, opt);
  std::string table = "eps,norm,norm_over_eps,iters,first_ratio\n";
  std::vector<double> xs, ys;
  ojson rows = ojson::array();
  for (double e : eps) {
    const FixedPointResult r = solve_fixed_point(make_boundary(cfg, pr, e), pr, iteration_config(cfg, e));
    const double nrm = discrete_norm(r.state, 2, pr.basis, pr.spec.h());
    const double ratio = r.report.ratio_estimates.empty() ? 0.0 : r.report.ratio_estimates.front();
    table += num(e) + "," + num(nrm) + "," + num(e > 0 ? nrm / e : 0.0) + "," + std::to_string(r.report.iters) + "," +
             num(ratio) + "\n";
    rows.push_back({{"eps", e}, {"norm", nrm}, {"iters", r.report.iters}, {"first_ratio", ratio}});
    xs.push_back(e);
    ys.push_back(nrm);
  }
  ojson j;
  j["runs"] = rows;
  const double s = slope(xs, ys);
  j["norm_vs_eps_slope"] = std::isfinite(s) ? ojson(s) : ojson(nullptr);
  return {{"eps_sweep.csv", table}, {"eps_sweep.json", j.dump(2)}};
}

}  // namespace

BoundaryData make_boundary(const RunConfig& cfg, const DuctProblem& pr, double eps) {
  const BoundaryConfig& b = cfg.boundary;
  BoundaryData bd;
  bd.E0 = eps * sample_terms(b.E0, pr.basis);
  bd.u1 = eps * sample_terms(b.u1, pr.basis);
  bd.u2 = eps * sample_terms(b.u2, pr.basis);
  bd.p1 = eps * sample_terms(b.p1, pr.basis);
  const Eigen::VectorXd ds = eps * sample_terms(b.s0, pr.basis);
  bd.A0 = (pr.profile.A * ((ds.array() / pr.gas.c_v).exp() - 1.0)).matrix();
  return bd;
}

Outputs cmd_background(const RunConfig& cfg, const CommandOptions& opt) {
  if (!(cfg.flow.M0 < 1.0)) throw RegimeError("background: flow.M0 must be subsonic (use 'supersonic')");
  const BackgroundProfile p = integrate_background(cfg.flow.M0, subsonic_anchor(cfg), cfg.duct.length, cfg.gas,
                                                   cfg.n_steps());
  Outputs out = profile_outputs(p, opt, "profile");
  out.emplace_back("invariants.json", invariants(p).dump(2));
  return out;
}

Outputs cmd_supersonic(const RunConfig& cfg, const CommandOptions& opt) {
  if (!(cfg.flow.M0 > 1.0)) throw RegimeError("supersonic: flow.M0 must exceed 1");
  const BackgroundProfile p = integrate_background(cfg.flow.M0, supersonic_anchor(cfg), cfg.duct.length, cfg.gas,
                                                   cfg.n_steps());
  Outputs out = profile_outputs(p, opt, "profile");
  out.emplace_back("invariants.json", invariants(p).dump(2));
  return out;
}

Outputs cmd_shock(const RunConfig& cfg, const CommandOptions& opt) {
  if (!cfg.flow.shock_position) throw ConfigError("shock: flow.shock_position is required");
  const ThermoAnchor anchor = cfg.flow.p_exit ? ThermoAnchor(ExitPressure{*cfg.flow.p_exit, cfg.flow.s_entry})
                                              : ThermoAnchor(EntryPressure{cfg.flow.p_entry.value_or(1.0), cfg.flow.s_entry});
  const TransonicShockSolution s =
      construct_transonic_shock(cfg.flow.M0, *cfg.flow.shock_position, cfg.duct.length, anchor, cfg.gas, cfg.n_steps());
  const JumpResiduals rh = rankine_hugoniot_residuals(s);
  Outputs out = profile_outputs(s.upstream, opt, "upstream");
  for (auto& f : profile_outputs(s.downstream, opt, "downstream")) out.push_back(std::move(f));
  ojson j;
  j["shock_pos"] = s.shock_pos;
  j["M_minus"] = s.M_minus;
  j["M_plus"] = s.M_plus;
  j["entropy_condition"] = s.M_plus < s.M_minus;
  j["rankine_hugoniot"] = {{"mass", rh.mass}, {"momentum", rh.momentum}, {"energy", rh.energy}};
  out.emplace_back("shock.json", j.dump(2));
  return out;
}

Outputs cmd_s_condition(const RunConfig& cfg, const CommandOptions& opt) {
  if (!opt.mu_sweep.empty()) return mu_sweep(cfg, opt, opt.mu_sweep);
  const DuctProblem pr = build_problem(cfg);
  const SConditionReport r = check_s_condition(pr.coeffs, pr.basis.cut(), threshold_factor(cfg, opt));
  return {{"s_condition.json", to_json(r)}};
}

Outputs cmd_solve(const RunConfig& cfg, const CommandOptions& opt) {
  if (!opt.eps_sweep.empty()) return eps_sweep(cfg, opt, opt.eps_sweep);
  const DuctProblem pr = build_problem(cfg);
  require_s_condition(pr, cfg, opt);
  const double eps = cfg.numerics.eps;
  const FixedPointResult r = solve_fixed_point(make_boundary(cfg, pr, eps), pr, iteration_config(cfg, eps));
  Outputs out = field_outputs(r.state, pr, opt.format);
  out.emplace_back("contraction.json", to_json(r.report));
  ojson res;
  res["full"] = norms_json(euler_residual(reconstruct(r.state, pr), pr.gas, pr.basis, pr.spec.h()).norms);
  res["perturbation"] = norms_json(perturbation_residual(r.state, pr).norms);
  out.emplace_back("residuals.json", res.dump(2));
  return out;
}

Outputs cmd_residual(const RunConfig& cfg, const CommandOptions& opt) {
  const int n = cfg.n_steps();
  if (n < 8) throw ConfigError("residual: duct.n_steps must be at least 8 for a refinement study");
  std::vector<int> levels{n / 4, n / 2, n};
  std::array<std::vector<double>, 5> full, pert;
  std::vector<double> hs;
  std::string table = "n_steps,h";
  for (const char* e : kEulerEquationNames) table += std::string(",full_") + e;
  for (const char* e : kEulerEquationNames) table += std::string(",perturbation_") + e;
  table += "\n";
  for (int lv : levels) {
    RunConfig c = cfg;
    c.duct.grid_n0 = lv + 1;
    const DuctProblem pr = build_problem(c);
    if (&lv == &levels.front()) require_s_condition(pr, c, opt);
    const double eps = cfg.numerics.eps;
    const FixedPointResult r = solve_fixed_point(make_boundary(c, pr, eps), pr, iteration_config(c, eps));
    const EulerResidualNorms f = euler_residual(reconstruct(r.state, pr), pr.gas, pr.basis, pr.spec.h()).norms;
    const EulerResidualNorms q = perturbation_residual(r.state, pr).norms;
    hs.push_back(pr.spec.h());
    table += std::to_string(lv) + "," + num(pr.spec.h());
    for (int e = 0; e < 5; ++e) {
      full[e].push_back(f.max[e]);
      table += "," + num(f.max[e]);
    }
    for (int e = 0; e < 5; ++e) {
      pert[e].push_back(q.max[e]);
      table += "," + num(q.max[e]);
    }
    table += "\n";
  }
  ojson j;
  j["n_steps"] = levels;
  j["h"] = hs;
  for (int e = 0; e < 5; ++e) {
    const double sf = slope(hs, full[e]), sp = slope(hs, pert[e]);
    j["observed_order"]["full"][kEulerEquationNames[e]] = std::isfinite(sf) ? ojson(sf) : ojson(nullptr);
    j["observed_order"]["perturbation"][kEulerEquationNames[e]] = std::isfinite(sp) ? ojson(sp) : ojson(nullptr);
  }
  return {{"residual_refinement.csv", table}, {"residuals.json", j.dump(2)}};
}

Outputs cmd_sweep(const RunConfig& cfg, const CommandOptions& opt) {
  CommandOptions o = opt;
  if (o.mu_sweep.empty() && o.eps_sweep.empty()) {
    o.mu_sweep = cfg.sweep.mu;
    o.eps_sweep = cfg.sweep.eps;
  }
  if (o.mu_sweep.empty() && o.eps_sweep.empty())
    throw ConfigError("sweep: give --mu-sweep, --eps-sweep or a \"sweep\" section");
  Outputs out;
  if (!o.mu_sweep.empty()) out = mu_sweep(cfg, o, o.mu_sweep);
  if (!o.eps_sweep.empty())
    for (auto& f : eps_sweep(cfg, o, o.eps_sweep)) out.push_back(std::move(f));
  return out;
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + s + "' in '" + text + "'");
    }
    if (used != s.size()) throw ConfigError("bad number '" + s + "' in '" + text + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
      throw ConfigError("range must read min:max:count");
    const double lo = to_double(a), hi = to_double(b);
    const int count = static_cast<int>(to_double(c));
    if (count < 1 || hi < lo) throw ConfigError("range must read min:max:count with count >= 1");
    for (int k = 0; k < count; ++k) out.push_back(count == 1 ? hi : lo + (hi - lo) * k / (count - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 64;
  if (dynamic_cast<const ChokingError*>(&e) || dynamic_cast<const SonicSingularityError*>(&e)) return 2;
  if (dynamic_cast<const RegimeError*>(&e)) return 3;
  if (dynamic_cast<const DivergenceError*>(&e)) return 4;
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    return exit_code_for(inner);
  } catch (...) {
  }
  return 1;
}

void write_outputs(const std::string& dir, const Outputs& outputs) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const auto& [name, text] : outputs) {
      const fs::path final_path = fs::path(dir) / name;
      const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
      std::ofstream f(tmp, std::ios::binary);
      f << text;
      f.close();
      if (!f) throw std::runtime_error("cannot write " + tmp.string());
      staged.emplace_back(tmp, final_path);
    }
  } catch (...) {
    for (const auto& s : staged) fs::remove(s.first);
    throw;
  }
  for (const auto& [tmp, final_path] : staged) fs::rename(tmp, final_path);
}

}  // namespace fanno::cli
