#include <doctest.h>

#include <string>

#include "mark0/config.hpp"

using namespace mark0;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key() + "@" + std::to_string(e.line()) + ": " + e.detail();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults parse from an empty document") {
  CHECK(parse_config("") == Config{});
  CHECK(parse_config("# nothing here\n\n") == Config{});
}

TEST_CASE("round trip") {
  Config c;
  c.model.R = 0.1 + 0.2;  // not exactly representable in short decimal
  c.model.theta = kInfinity;
  c.model.n_firms = 123;
  c.policy.phi_pi = 0.75;
  c.length = {777, 77};
  c.sweep_x = {"R", 0.5, 2.5, 5};
  c.sweep_y = {"theta", 1.0, 10.0, 4};
  c.ensemble_size = 3;
  c.thresholds.crisis_min_amplitude = 0.4;
  c.shock.shock_time = 500;
  c.shock.window_before = 100;
  c.shock.window_after = 50;
  c.shock.relative = false;
  c.shock_ensemble = 2;
  const auto text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(text.find("theta = inf") != std::string::npos);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("values, comments and overrides") {
  const auto c = parse_config("R = 1.5  # hiring faster\ntheta=inf\n  phi_pi = 0.5\nT = 300\nt_eq = 100\n");
  CHECK(c.model.R == 1.5);
  CHECK(c.model.theta == kInfinity);
  CHECK(c.policy.phi_pi == 0.5);
  CHECK(c.length.T == 300);

  Config o;
  apply_setting(o, "seed", "99");
  apply_setting(o, "sweep.x", "rho_star");
  CHECK(o.model.seed == 99);
  CHECK(o.sweep_x.name == "rho_star");
  CHECK_THROWS_AS(apply_setting(o, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(o, "R", "fast"), ConfigError);
}

TEST_CASE("errors name the key and line") {
  CHECK(error_of("R = 2\nR = -1\n").rfind("R@2", 0) == 0);
  CHECK(error_of("R = 2\nR = 3\n").find("duplicate") != std::string::npos);
  CHECK(error_of("\n\nwhatever = 1\n").rfind("whatever@3", 0) == 0);
  CHECK(error_of("theta 3\n").find("@1") != std::string::npos);
  CHECK(error_of("T = 100\nt_eq = 200\n") != "");
  CHECK(error_of("n_firms = 0\n").rfind("n_firms@1", 0) == 0);
  CHECK(error_of("theta = inf\n") == "");
  CHECK(error_of("sweep.x = phi_pi\nsweep.y = phi_pi\n") != "");
}
