#include "mark0/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mark0 {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  std::string_view t = text;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || std::isnan(v)) {
    throw ConfigError(std::string(key), 0, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key), 0,
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(key), 0, "expected true or false, got '" + std::string(text) + "'");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Keys beyond the model/policy registry.
const std::vector<const char*>& extra_keys() {
  static const std::vector<const char*> keys = {
      "T",
      "t_eq",
      "sweep.x",
      "sweep.x_min",
      "sweep.x_max",
      "sweep.x_steps",
      "sweep.y",
      "sweep.y_min",
      "sweep.y_max",
      "sweep.y_steps",
      "sweep.ensemble",
      "phase.fe_max_u",
      "phase.ec_min_amplitude",
      "phase.fu_min_u",
      "shock.rate_before",
      "shock.rate_after",
      "shock.time",
      "shock.window_before",
      "shock.window_after",
      "shock.relative",
      "shock.ensemble",
  };
  return keys;
}

template <class C>
auto double_slot(C& c, std::string_view key) -> decltype(&c.shock.rate_before) {
  if (key == "sweep.x_min") return &c.sweep_x.min;
  if (key == "sweep.x_max") return &c.sweep_x.max;
  if (key == "sweep.y_min") return &c.sweep_y.min;
  if (key == "sweep.y_max") return &c.sweep_y.max;
  if (key == "phase.fe_max_u") return &c.thresholds.full_employment_max_u;
  if (key == "phase.ec_min_amplitude") return &c.thresholds.crisis_min_amplitude;
  if (key == "phase.fu_min_u") return &c.thresholds.full_unemployment_min_u;
  if (key == "shock.rate_before") return &c.shock.rate_before;
  if (key == "shock.rate_after") return &c.shock.rate_after;
  return nullptr;
}

template <class C>
auto size_slot(C& c, std::string_view key) -> decltype(&c.length.T) {
  if (key == "T") return &c.length.T;
  if (key == "t_eq") return &c.length.t_eq;
  if (key == "sweep.x_steps") return &c.sweep_x.steps;
  if (key == "sweep.y_steps") return &c.sweep_y.steps;
  if (key == "sweep.ensemble") return &c.ensemble_size;
  if (key == "shock.time") return &c.shock.shock_time;
  if (key == "shock.window_before") return &c.shock.window_before;
  if (key == "shock.window_after") return &c.shock.window_after;
  if (key == "shock.ensemble") return &c.shock_ensemble;
  return nullptr;
}

std::string value_of(const Config& c, const std::string& key) {
  if (key == "seed") return std::to_string(c.model.seed);
  if (key == "n_firms") return std::to_string(c.model.n_firms);
  if (is_parameter(key)) return format_double(get_parameter(key, c.model, c.policy));
  if (key == "sweep.x") return c.sweep_x.name;
  if (key == "sweep.y") return c.sweep_y.name;
  if (key == "shock.relative") return c.shock.relative ? "true" : "false";
  if (auto* d = double_slot(c, key)) return format_double(*d);
  if (auto* n = size_slot(c, key)) return std::to_string(*n);
  throw ConfigError(key, 0, "unknown key");
}

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::invalid_argument((line > 0 ? "config line " + std::to_string(line) + ": " : std::string()) +
                            "key '" + key + "': " + message),
      key_(std::move(key)),
      line_(line),
      detail_(message) {}

SweepSpec Config::sweep_spec() const {
  SweepSpec s;
  s.x = sweep_x;
  s.y = sweep_y;
  s.model = model;
  s.policy = policy;
  s.ensemble_size = ensemble_size;
  s.length = length;
  s.base_seed = model.seed;
  s.thresholds = thresholds;
  return s;
}

ShockSpec Config::shock_spec() const {
  ShockSpec s = shock;
  s.t_eq = length.t_eq;
  return s;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out = parameter_names();
    for (const char* key : extra_keys()) out.emplace_back(key);
    return out;
  }();
  return keys;
}

void apply_setting(Config& config, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  const std::string k(key);
  if (key == "seed") {
    config.model.seed = parse_unsigned(key, value);
    return;
  }
  if (key == "n_firms") {
    const auto n = parse_unsigned(key, value);
    if (n > 100000000) throw ConfigError(k, 0, "n_firms is unreasonably large");
    config.model.n_firms = static_cast<int>(n);
    return;
  }
  if (is_parameter(key)) {
    set_parameter(key, parse_double(key, value), config.model, config.policy);
    return;
  }
  if (key == "sweep.x" || key == "sweep.y") {
    if (value.empty()) throw ConfigError(k, 0, "expected a parameter name");
    (key == "sweep.x" ? config.sweep_x : config.sweep_y).name = std::string(value);
    return;
  }
  if (key == "shock.relative") {
    config.shock.relative = parse_bool(key, value);
    return;
  }
  if (auto* d = double_slot(config, key)) {
    *d = parse_double(key, value);
    return;
  }
  if (auto* n = size_slot(config, key)) {
    *n = static_cast<std::size_t>(parse_unsigned(key, value));
    return;
  }
  throw ConfigError(k, 0, "unknown key");
}

void validate_config(const Config& c) {
  auto fail_from = [](const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(msg.substr(0, msg.find(' ')), 0, msg);
  };
  try {
    c.model.validate();
    c.policy.validate();
  } catch (const std::invalid_argument& e) {
    fail_from(e);
  }
  if (c.length.T == 0) throw ConfigError("T", 0, "T must be >= 1");
  if (c.length.t_eq >= c.length.T) throw ConfigError("t_eq", 0, "t_eq must be < T");
  for (const auto* key : {"sweep.x", "sweep.y"}) {
    const Axis& a = std::string_view(key) == "sweep.x" ? c.sweep_x : c.sweep_y;
    if (!is_parameter(a.name) || a.name == "seed") {
      throw ConfigError(key, 0, "'" + a.name + "' is not a parameter name");
    }
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw ConfigError(std::string(key) + "_min", 0, "axis bounds must be finite");
    }
    if (a.steps < 2) throw ConfigError(std::string(key) + "_steps", 0, "steps must be >= 2");
  }
  if (c.sweep_x.name == c.sweep_y.name) throw ConfigError("sweep.y", 0, "both axes name the same parameter");
  if (c.ensemble_size == 0) throw ConfigError("sweep.ensemble", 0, "ensemble must be >= 1");
  if (!(c.thresholds.full_employment_max_u >= 0.0)) {
    throw ConfigError("phase.fe_max_u", 0, "threshold must be >= 0");
  }
  if (!(c.thresholds.crisis_min_amplitude >= 0.0)) {
    throw ConfigError("phase.ec_min_amplitude", 0, "threshold must be >= 0");
  }
  if (!(c.thresholds.full_unemployment_min_u >= 0.0)) {
    throw ConfigError("phase.fu_min_u", 0, "threshold must be >= 0");
  }
  if (!std::isfinite(c.shock.rate_before)) throw ConfigError("shock.rate_before", 0, "must be finite");
  if (!std::isfinite(c.shock.rate_after)) throw ConfigError("shock.rate_after", 0, "must be finite");
  if (c.shock.shock_time <= c.length.t_eq) {
    throw ConfigError("shock.time", 0, "shock.time must be > t_eq");
  }
  if (c.shock.window_before == 0 || c.shock.window_before > c.shock.shock_time - c.length.t_eq) {
    throw ConfigError("shock.window_before", 0, "window_before must be in [1, shock.time - t_eq]");
  }
  if (c.shock.window_after == 0) throw ConfigError("shock.window_after", 0, "window_after must be >= 1");
  if (c.shock_ensemble == 0) throw ConfigError("shock.ensemble", 0, "ensemble must be >= 1");
}

Config parse_config(std::string_view text) {
  Config config;
  std::map<std::string, int> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (lines.count(key)) {
      throw ConfigError(key, line_no, "duplicate key (first set on line " +
                                          std::to_string(lines[key]) + ")");
    }
    try {
      apply_setting(config, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(key, line_no, e.detail());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, line_no, e.what());
    }
    lines[key] = line_no;
  }
  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    const auto it = lines.find(e.key());
    if (it == lines.end()) throw;
    throw ConfigError(e.key(), it->second, e.detail());
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& config) {
  std::string out;
  for (const auto& key : config_keys()) out += key + " = " + value_of(config, key) + "\n";
  return out;
}

}  // namespace mark0
