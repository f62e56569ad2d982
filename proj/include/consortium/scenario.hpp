#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "consortium/docp.hpp"
#include "consortium/model.hpp"
#include "consortium/sim.hpp"

namespace consortium {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `key = value` lines; `#` starts a comment. Duplicate keys and
/// malformed lines throw ConfigError.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Model parameters from key-value text. Recognized keys: k_v, k_s, rho_max,
/// phi_max, q_min, gamma, mu_max, beta, s_in, d_max; missing keys keep their
/// defaults. Unknown keys are ignored so scenario files can be reused.
ModelParams parse_params(const std::string& text);
ModelParams load_params(const std::string& path);

/// Measured initial condition of the reference experiment.
inline constexpr StateVector kInitialExperiment{0.1629, 0.0487, 0.0003, 17.7, 0.035};

struct Scenario {
  ModelParams params;
  std::string x0 = "x_init";  // x_init, x_star, or "explicit" with x0_values
  StateVector x0_values = kInitialExperiment;
  double t_f = 20.0;
  std::size_t n_steps = 7000;
  Method method = Method::GaussLegendre2;
  // Constant control for `simulate`; the static optimum when unset.
  std::optional<double> alpha;
  std::optional<double> d;
  std::size_t starts = 1;
  bool warm_start = true;
  std::uint64_t seed = 20240601;
  std::size_t max_iterations = 5000;
  StepRule step_rule = StepRule::BarzilaiBorwein;
  double eps_sing = 1e-3;
  std::size_t stride = 1;

  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
/// Text that parse_scenario() maps back to an identical Scenario.
std::string format_scenario(const Scenario& s);

/// Parses "x_init", "x_star" or five comma/space separated numbers into the
/// scenario's x0 fields.
void set_initial_condition(Scenario& s, const std::string& spec);

/// The concrete initial state; x_star is the functional equilibrium at the
/// static optimum of s.params.
StateVector resolve_initial_state(const Scenario& s);

}  // namespace consortium
