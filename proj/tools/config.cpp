#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace fanno::cli {

namespace {

class TrigParser {
 public:
  explicit TrigParser(const std::string& s) : s_(s) {}

  std::vector<TrigTerm> parse() {
    std::vector<TrigTerm> terms;
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1.0 : 1.0;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      TrigTerm t = term();
      t.c *= sign;
      if (t.c != 0.0) terms.push_back(t);
      first = false;
      skip();
    }
    return terms;
  }

 private:
  TrigTerm term() {
    TrigTerm t;
    t.c = 1.0;
    bool has1 = false, has2 = false, sin1 = false, sin2 = false;
    for (;;) {
      skip();
      if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
        t.c *= number();
      } else if (s_.compare(pos_, 3, "cos") == 0 || s_.compare(pos_, 3, "sin") == 0) {
        const bool is_sin = s_[pos_] == 's';
        pos_ += 3;
        expect('(');
        int m = 1;
        skip();
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '-') {
          m = integer();
          expect('*');
        }
        skip();
        if (s_.compare(pos_, 2, "x1") != 0 && s_.compare(pos_, 2, "x2") != 0) fail("expected x1 or x2");
        const int var = s_[pos_ + 1] - '0';
        pos_ += 2;
        expect(')');
        if (m < 0) {
          m = -m;
          if (is_sin) t.c = -t.c;
        }
        if (is_sin && m == 0) t.c = 0.0;
        bool& has = var == 1 ? has1 : has2;
        if (has) fail("at most one trigonometric factor per variable");
        has = true;
        (var == 1 ? t.m1 : t.m2) = m;
        (var == 1 ? sin1 : sin2) = is_sin;
      } else {
        fail("expected a number, cos(...) or sin(...)");
      }
      skip();
      if (peek() != '*') break;
      ++pos_;
    }
    t.parity = 1 + (sin1 ? 1 : 0) + (sin2 ? 2 : 0);
    return t;
  }

  double number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  int integer() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin) fail("bad integer");
    pos_ += static_cast<std::size_t>(end - begin);
    return static_cast<int>(v);
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("boundary expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

void check_keys(const nlohmann::json& node, const char* where, std::set<std::string> allowed) {
  if (!node.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [k, v] : node.items())
    if (!allowed.count(k)) throw ConfigError(std::string("unknown key '") + k + "' in " + where);
}

template <class T>
void read(const nlohmann::json& node, const char* key, T& out) {
  if (!node.contains(key)) return;
  try {
    out = node.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

template <class T>
void read(const nlohmann::json& node, const char* key, std::optional<T>& out) {
  if (!node.contains(key)) return;
  T v{};
  read(node, key, v);
  out = v;
}

std::vector<TrigTerm> parse_boundary_entry(const nlohmann::json& node, const char* name) {
  if (node.is_string()) return parse_trig_expression(node.get<std::string>());
  if (node.is_number()) return parse_trig_expression(std::to_string(node.get<double>()));
  if (node.is_object() && node.contains("fourier")) {
    check_keys(node, name, {"fourier"});
    std::vector<TrigTerm> terms;
    for (const auto& row : node.at("fourier")) {
      check_keys(row, "fourier row", {"i", "m1", "m2", "c"});
      TrigTerm t;
      read(row, "i", t.parity);
      read(row, "m1", t.m1);
      read(row, "m2", t.m2);
      read(row, "c", t.c);
      if (t.parity < 1 || t.parity > 4 || t.m1 < 0 || t.m2 < 0 || !parity_active(t.parity, t.m1, t.m2))
        throw ConfigError(std::string("fourier row of ") + name + " is not a basis function");
      terms.push_back(t);
    }
    return terms;
  }
  throw ConfigError(std::string("boundary entry '") + name + "' must be an expression string or a fourier table");
}

void positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

std::vector<TrigTerm> parse_trig_expression(const std::string& text) { return TrigParser(text).parse(); }

Eigen::VectorXd sample_terms(const std::vector<TrigTerm>& terms, const TangentialBasis& basis) {
  const int n = basis.n_t();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n * n);
  for (const TrigTerm& t : terms)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        const double a = t.m1 * basis.nodes()(i1), b = t.m2 * basis.nodes()(i2);
        const bool s1 = t.parity == 2 || t.parity == 4, s2 = t.parity >= 3;
        v(i1 + n * i2) += t.c * (s1 ? std::sin(a) : std::cos(a)) * (s2 ? std::sin(b) : std::cos(b));
      }
  return v;
}

std::vector<double> parse_grid(const nlohmann::json& node, const char* what) {
  std::vector<double> out;
  if (node.is_array()) {
    for (const auto& v : node) {
      if (!v.is_number()) throw ConfigError(std::string(what) + " list must hold numbers");
      out.push_back(v.get<double>());
    }
  } else if (node.is_object()) {
    check_keys(node, what, {"min", "max", "count"});
    double lo = 0.0, hi = 0.0;
    int count = 0;
    read(node, "min", lo);
    read(node, "max", hi);
    read(node, "count", count);
    if (count < 1 || !(hi >= lo)) throw ConfigError(std::string(what) + " range needs count >= 1 and max >= min");
    for (int k = 0; k < count; ++k) out.push_back(count == 1 ? hi : lo + (hi - lo) * k / (count - 1));
  } else {
    throw ConfigError(std::string(what) + " must be a list or a {min, max, count} range");
  }
  return out;
}

RunConfig parse_config(const nlohmann::json& doc) {
  check_keys(doc, "config", {"schema", "gas", "flow", "duct", "boundary", "numerics", "sweep"});
  if (!doc.contains("schema") || !doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != kConfigSchema)
    throw ConfigError("config: \"schema\" must be " + std::to_string(kConfigSchema));
  RunConfig c;
  c.duct.length = 1.0;
  c.duct.grid_n0 = 201;
  c.duct.grid_n_t = 16;
  c.duct.mode_cut = 4;

  if (doc.contains("gas")) {
    const auto& g = doc.at("gas");
    check_keys(g, "gas", {"gamma", "mu", "c_v", "k0", "R"});
    read(g, "gamma", c.gas.gamma);
    read(g, "mu", c.gas.mu);
    read(g, "c_v", c.gas.c_v);
    read(g, "k0", c.gas.k0);
    read(g, "R", c.gas.R);
  }
  if (doc.contains("flow")) {
    const auto& f = doc.at("flow");
    check_keys(f, "flow", {"M0", "p_exit", "p_entry", "s_entry", "shock_position"});
    read(f, "M0", c.flow.M0);
    read(f, "p_exit", c.flow.p_exit);
    read(f, "p_entry", c.flow.p_entry);
    read(f, "s_entry", c.flow.s_entry);
    read(f, "shock_position", c.flow.shock_position);
  }
  if (doc.contains("duct")) {
    const auto& d = doc.at("duct");
    check_keys(d, "duct", {"length", "n_steps", "grid_n_t", "mode_cut"});
    int n_steps = c.duct.grid_n0 - 1;
    read(d, "length", c.duct.length);
    read(d, "n_steps", n_steps);
    read(d, "grid_n_t", c.duct.grid_n_t);
    read(d, "mode_cut", c.duct.mode_cut);
    if (n_steps < 2) throw ConfigError("duct.n_steps must be at least 2");
    c.duct.grid_n0 = n_steps + 1;
  }
  if (doc.contains("boundary")) {
    const auto& b = doc.at("boundary");
    check_keys(b, "boundary", {"E0", "s0", "u1", "u2", "p1"});
    if (b.contains("E0")) c.boundary.E0 = parse_boundary_entry(b.at("E0"), "E0");
    if (b.contains("s0")) c.boundary.s0 = parse_boundary_entry(b.at("s0"), "s0");
    if (b.contains("u1")) c.boundary.u1 = parse_boundary_entry(b.at("u1"), "u1");
    if (b.contains("u2")) c.boundary.u2 = parse_boundary_entry(b.at("u2"), "u2");
    if (b.contains("p1")) c.boundary.p1 = parse_boundary_entry(b.at("p1"), "p1");
  }
  if (doc.contains("numerics")) {
    const auto& n = doc.at("numerics");
    check_keys(n, "numerics", {"eps", "max_iters", "tol_update", "contraction_window", "threshold_factor", "K"});
    read(n, "eps", c.numerics.eps);
    read(n, "max_iters", c.numerics.max_iters);
    read(n, "contraction_window", c.numerics.contraction_window);
    read(n, "K", c.numerics.K);
    if (n.contains("tol_update")) {
      read(n, "tol_update", c.numerics.tol_update);
      positive(c.numerics.tol_update, "numerics.tol_update");
    }
    if (n.contains("threshold_factor")) {
      read(n, "threshold_factor", c.numerics.threshold_factor);
      positive(c.numerics.threshold_factor, "numerics.threshold_factor");
    }
    if (c.numerics.max_iters < 2) throw ConfigError("numerics.max_iters must be at least 2");
    if (c.numerics.contraction_window < 1) throw ConfigError("numerics.contraction_window must be positive");
    if (!std::isfinite(c.numerics.eps) || c.numerics.eps < 0.0) throw ConfigError("numerics.eps must be >= 0");
  }
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    check_keys(s, "sweep", {"mu", "eps"});
    if (s.contains("mu")) c.sweep.mu = parse_grid(s.at("mu"), "sweep.mu");
    if (s.contains("eps")) c.sweep.eps = parse_grid(s.at("eps"), "sweep.eps");
  }

  try {
    c.gas.validate();
    c.duct.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  positive(c.flow.M0, "flow.M0");
  if (c.flow.p_exit && c.flow.p_entry) throw ConfigError("flow: give p_exit or p_entry, not both");
  if (c.flow.p_exit) positive(*c.flow.p_exit, "flow.p_exit");
  if (c.flow.p_entry) positive(*c.flow.p_entry, "flow.p_entry");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace fanno::cli
