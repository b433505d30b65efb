// Command-line front end: run, sweep, shock, validate.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mark0/config.hpp"
#include "mark0/experiments.hpp"
#include "mark0/io.hpp"
#include "mark0/rng.hpp"
#include "mark0/validation.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_out, bool jobs) {
  sub->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  if (!default_out.empty()) {
    c.out = default_out;
    sub->add_option("--out", c.out, "output path")->capture_default_str();
  }
  sub->add_option("--seed", c.seed, "seed (base seed for sweeps and ensembles)");
  if (jobs) {
    sub->add_option("--jobs", c.jobs, "worker threads, 0 = all cores")->capture_default_str();
  }
  sub->add_option("overrides", c.overrides, "key=value parameter overrides");
}

mark0::Config resolve(const Common& c) {
  mark0::Config config = c.config_path.empty() ? mark0::Config{} : mark0::load_config(c.config_path);
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw mark0::ConfigError(o, 0, "override must look like key=value");
    }
    mark0::apply_setting(config, o.substr(0, eq), o.substr(eq + 1));
  }
  if (c.seed) config.model.seed = *c.seed;
  mark0::validate_config(config);
  return config;
}

int cmd_run(const Common& c) {
  const auto config = resolve(c);
  const auto record =
      mark0::run_simulation(config.model, config.policy, config.length.T, config.model.seed);
  mark0::Provenance prov{std::string(mark0::kTimeseriesSchema), {config.model.seed}, config};
  mark0::write_timeseries(record, c.out, &prov);
  const auto s = mark0::summarize(record, config.length.t_eq, config.thresholds);
  std::printf("wrote %s: mean_u=%.6g amplitude=%.6g mean_pi=%.6g var_eps=%.6g phase=%s\n",
              c.out.c_str(), s.mean_u, s.amplitude, s.mean_pi, s.var_epsilon,
              std::string(mark0::phase_name(s.phase)).c_str());
  return 0;
}

int cmd_sweep(const Common& c) {
  const auto config = resolve(c);
  const auto spec = config.sweep_spec();
  const auto grid = mark0::sweep(spec, c.jobs, [](std::size_t done, std::size_t total) {
    std::fprintf(stderr, "\rcells %zu/%zu", done, total);
    if (done == total) std::fprintf(stderr, "\n");
  });
  mark0::write_grid(grid, config, c.out);
  std::size_t failed = 0;
  for (const auto& cell : grid.cells) failed += cell.result.failed();
  std::printf("wrote %s: %zu cells, %zu failed runs\n", c.out.c_str(), grid.cells.size(), failed);
  return 0;
}

int cmd_shock(const Common& c) {
  const auto config = resolve(c);
  std::vector<std::uint64_t> seeds(config.shock_ensemble);
  for (std::size_t r = 0; r < seeds.size(); ++r) seeds[r] = mark0::derive_seed(config.model.seed, {r});
  const auto response =
      mark0::monetary_shock(config.shock_spec(), config.model, config.policy, seeds, c.jobs);
  mark0::Provenance prov{std::string(mark0::kImpulseSchema), seeds, config};
  mark0::write_impulse(response, c.out, &prov);
  std::printf("wrote %s: %zu lags, %zu failed seeds\n", c.out.c_str(), response.lag.size(),
              response.failed);
  return 0;
}

int cmd_validate(const Common& c) {
  mark0::ValidationOptions options;
  options.seed = c.seed.value_or(1);
  options.jobs = c.jobs;
  bool ok = true;
  mark0::run_validation(options, [&](const mark0::CheckResult& r) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based macroeconomy with a Taylor-rule central bank"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Common run_opts, sweep_opts, shock_opts, validate_opts;
  auto* run = app.add_subcommand("run", "single run -> time-series CSV");
  add_common(run, run_opts, "run.csv", false);
  auto* sweep = app.add_subcommand("sweep", "2-D parameter sweep -> phase-grid JSON");
  add_common(sweep, sweep_opts, "grid.json", true);
  auto* shock = app.add_subcommand("shock", "monetary shock ensemble -> impulse-response CSV");
  add_common(shock, shock_opts, "impulse.csv", true);
  auto* validate = app.add_subcommand("validate", "invariant and oracle suites");
  validate->add_option("--seed", validate_opts.seed, "base seed");
  validate->add_option("--jobs", validate_opts.jobs, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*shock) return cmd_shock(shock_opts);
    if (*validate) return cmd_validate(validate_opts);
  } catch (const mark0::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
