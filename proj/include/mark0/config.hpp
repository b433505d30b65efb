#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mark0/experiments.hpp"
#include "mark0/observables.hpp"
#include "mark0/params.hpp"

namespace mark0 {

/// Everything a CLI invocation needs, as one flat key = value document.
///
/// Keys: every name in parameter_names(); T, t_eq; sweep.x, sweep.x_min,
/// sweep.x_max, sweep.x_steps (same for y), sweep.ensemble;
/// phase.fe_max_u, phase.ec_min_amplitude, phase.fu_min_u; shock.rate_before,
/// shock.rate_after, shock.time, shock.window_before, shock.window_after,
/// shock.relative, shock.ensemble. `seed` doubles as the sweep base seed.
struct Config {
  ModelParams model;
  PolicyParams policy;
  RunLength length;
  Axis sweep_x{"phi_pi", 0.0, 1.5, 21};
  Axis sweep_y{"phi_eps", 0.0, 1.5, 21};
  std::size_t ensemble_size = 4;
  PhaseThresholds thresholds;
  ShockSpec shock;
  std::size_t shock_ensemble = 8;

  SweepSpec sweep_spec() const;
  ShockSpec shock_spec() const;  // with t_eq taken from `length`

  friend bool operator==(const Config&, const Config&) = default;
};

/// Error in a config document or override; line is 0 for overrides.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }  // message without location

 private:
  std::string key_;
  int line_;
  std::string detail_;
};

/// Keys accepted by parse_config, in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value without validating cross-field
/// invariants. Throws ConfigError (line 0) on an unknown key or bad value.
void apply_setting(Config& config, std::string_view key, std::string_view value);

/// Throws ConfigError naming the key of the first violated invariant.
void validate_config(const Config& config);

/// Parses `key = value` lines; `#` starts a comment; blank lines are ignored.
/// Unspecified keys keep their defaults. Numbers accept inf. Errors name the
/// key and the 1-based line.
Config parse_config(std::string_view text);

Config load_config(const std::string& path);

/// One `key = value` line per key, in config_keys() order, exact for doubles.
std::string serialize_config(const Config& config);

}  // namespace mark0
