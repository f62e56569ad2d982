#include "consortium/scenario.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "consortium/equilibria.hpp"
#include "consortium/socp.hpp"

namespace consortium {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("key " + key + ": not a number: " + value);
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("key " + key + ": not a non-negative integer: " + value);
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key " + key + ": not a boolean: " + value);
}

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

struct ParamField {
  const char* key;
  double ModelParams::*field;
};

constexpr ParamField kParamFields[] = {
    {"k_v", &ModelParams::k_v},         {"k_s", &ModelParams::k_s},
    {"rho_max", &ModelParams::rho_max}, {"phi_max", &ModelParams::phi_max},
    {"q_min", &ModelParams::q_min},     {"gamma", &ModelParams::gamma},
    {"mu_max", &ModelParams::mu_max},   {"beta", &ModelParams::beta},
    {"s_in", &ModelParams::s_in},       {"d_max", &ModelParams::d_max},
};

constexpr std::array<const char*, 13> kRunKeys = {
    "x0",   "t_f",            "n_steps",   "method",   "alpha",  "d",          "starts",
    "seed", "max_iterations", "step_rule", "eps_sing", "stride", "warm_start"};

bool is_param_key(const std::string& key) {
  for (const auto& f : kParamFields)
    if (key == f.key) return true;
  return false;
}

bool is_run_key(const std::string& key) {
  for (const char* k : kRunKeys)
    if (key == k) return true;
  return false;
}

ModelParams params_from(const std::map<std::string, std::string>& kv) {
  ModelParams p;
  for (const auto& f : kParamFields)
    if (auto it = kv.find(f.key); it != kv.end()) p.*(f.field) = to_double(f.key, it->second);
  p.validate();
  return p;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
  }
  return out;
}

ModelParams parse_params(const std::string& text) {
  const auto kv = parse_key_values(text);
  for (const auto& [key, value] : kv)
    if (!is_param_key(key)) throw ConfigError("unknown parameter key " + key);
  return params_from(kv);
}

ModelParams load_params(const std::string& path) { return parse_params(read_file(path)); }

void set_initial_condition(Scenario& s, const std::string& spec) {
  if (spec == "x_init" || spec == "x_star") {
    s.x0 = spec;
    s.x0_values = kInitialExperiment;
    return;
  }
  std::string cleaned = spec;
  for (char& ch : cleaned)
    if (ch == ',') ch = ' ';
  std::istringstream in(cleaned);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) v.push_back(to_double("x0", tok));
  if (v.size() != 5) throw ConfigError("x0: expected x_init, x_star or five numbers");
  s.x0 = "explicit";
  s.x0_values = {v[0], v[1], v[2], v[3], v[4]};
}

Scenario parse_scenario(const std::string& text) {
  const auto kv = parse_key_values(text);
  for (const auto& [key, value] : kv)
    if (!is_param_key(key) && !is_run_key(key)) throw ConfigError("unknown key " + key);
  Scenario s;
  s.params = params_from(kv);
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("x0")) set_initial_condition(s, *v);
  if (auto v = get("t_f")) s.t_f = to_double("t_f", *v);
  if (auto v = get("n_steps")) s.n_steps = to_unsigned("n_steps", *v);
  if (auto v = get("method")) {
    if (*v == "gauss2")
      s.method = Method::GaussLegendre2;
    else if (*v == "rk4")
      s.method = Method::RungeKutta4;
    else
      throw ConfigError("method: expected gauss2 or rk4");
  }
  if (auto v = get("alpha")) s.alpha = to_double("alpha", *v);
  if (auto v = get("d")) s.d = to_double("d", *v);
  if (auto v = get("starts")) s.starts = to_unsigned("starts", *v);
  if (auto v = get("warm_start")) s.warm_start = to_bool("warm_start", *v);
  if (auto v = get("seed")) s.seed = to_unsigned("seed", *v);
  if (auto v = get("max_iterations")) s.max_iterations = to_unsigned("max_iterations", *v);
  if (auto v = get("step_rule")) {
    if (*v == "bb")
      s.step_rule = StepRule::BarzilaiBorwein;
    else if (*v == "fixed")
      s.step_rule = StepRule::Fixed;
    else
      throw ConfigError("step_rule: expected bb or fixed");
  }
  if (auto v = get("eps_sing")) s.eps_sing = to_double("eps_sing", *v);
  if (auto v = get("stride")) s.stride = to_unsigned("stride", *v);
  if (!(s.t_f > 0.0)) throw ConfigError("t_f must be > 0");
  if (s.n_steps < 1 || s.stride < 1 || s.starts < 1)
    throw ConfigError("n_steps, stride and starts must be >= 1");
  return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "# model parameters\n";
  for (const auto& f : kParamFields) out << f.key << " = " << fmt(s.params.*(f.field)) << "\n";
  out << "\n# run\n";
  if (s.x0 == "explicit") {
    const StateVector& x = s.x0_values;
    out << "x0 = " << fmt(x.s) << ", " << fmt(x.e) << ", " << fmt(x.v) << ", " << fmt(x.q) << ", "
        << fmt(x.c) << "\n";
  } else {
    out << "x0 = " << s.x0 << "\n";
  }
  out << "t_f = " << fmt(s.t_f) << "\n";
  out << "n_steps = " << s.n_steps << "\n";
  out << "method = " << (s.method == Method::GaussLegendre2 ? "gauss2" : "rk4") << "\n";
  if (s.alpha) out << "alpha = " << fmt(*s.alpha) << "\n";
  if (s.d) out << "d = " << fmt(*s.d) << "\n";
  out << "starts = " << s.starts << "\n";
  out << "warm_start = " << (s.warm_start ? "true" : "false") << "\n";
  out << "seed = " << s.seed << "\n";
  out << "max_iterations = " << s.max_iterations << "\n";
  out << "step_rule = " << (s.step_rule == StepRule::BarzilaiBorwein ? "bb" : "fixed") << "\n";
  out << "eps_sing = " << fmt(s.eps_sing) << "\n";
  out << "stride = " << s.stride << "\n";
  return out.str();
}

StateVector resolve_initial_state(const Scenario& s) {
  if (s.x0 == "x_star") {
    const StaticSolution opt = coordinate_ascent(s.params);
    const auto x = functional_equilibrium(opt.alpha_bar, opt.d_bar, s.params);
    if (!x) throw DomainError("x_star: no functional equilibrium at the static optimum");
    return *x;
  }
  return s.x0_values;
}

}  // namespace consortium
