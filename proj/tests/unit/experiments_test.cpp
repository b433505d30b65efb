#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "mark0/config.hpp"
#include "mark0/experiments.hpp"
#include "mark0/io.hpp"
#include "mark0/rng.hpp"

using namespace mark0;

namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.x = {"phi_pi", 0.0, 1.0, 2};
  spec.y = {"theta", 1.0, 3.0, 2};
  spec.model.n_firms = 60;
  spec.length = {400, 200};
  spec.ensemble_size = 2;
  spec.base_seed = 42;
  return spec;
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, {0, 1, 2}) == derive_seed(1, {0, 1, 2}));
  CHECK(derive_seed(1, {0, 1, 2}) != derive_seed(1, {1, 0, 2}));
  CHECK(derive_seed(1, {0}) != derive_seed(2, {0}));
  Rng a(3), b(3);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("run length is validated") {
  ModelParams m;
  m.n_firms = 10;
  CHECK_THROWS_AS(run_simulation(m, {}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ensemble(m, {}, {100, 100}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(ensemble(m, {}, {100, 10}, {}), std::invalid_argument);
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<int> seen(100, 0);
  parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i] += 1; });
  for (int s : seen) CHECK(s == 1);
  std::atomic<int> calls{0};
  CHECK_THROWS_AS(parallel_for(20, 3,
                               [&](std::size_t i) {
                                 ++calls;
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("a one-seed ensemble is a plain run") {
  ModelParams m;
  m.n_firms = 80;
  PolicyParams p;
  const auto e = ensemble(m, p, {600, 300}, {17});
  const auto s = summarize(run_simulation(m, p, 600, 17), 300);
  REQUIRE(e.complete());
  CHECK(e.mean_u.mean == s.mean_u);
  CHECK(e.amplitude.mean == s.amplitude);
  CHECK(e.mean_u.stddev == 0.0);
  CHECK(e.majority == s.phase);
}

TEST_CASE("sweep is independent of the worker count and of other cells") {
  const auto spec = small_sweep();
  const auto serial = sweep(spec, 1);
  const auto threaded = sweep(spec, 3);
  Config config;
  CHECK(format_grid(serial, config) == format_grid(threaded, config));

  REQUIRE(serial.cells.size() == 4);
  const auto& c = serial.at(1, 1);
  CHECK(c.x == 1.0);
  CHECK(c.y == 3.0);
  CHECK(c.seeds == cell_seeds(spec, 1, 1));
  CHECK(c.seeds[0] == derive_seed(42, {1, 1, 0}));
  const auto alone = evaluate_cell(spec, 1, 1);
  CHECK(alone.result.mean_u.mean == c.result.mean_u.mean);
  CHECK(alone.result.amplitude.mean == c.result.amplitude.mean);

  const auto [m, p] = cell_params(spec, 1, 0);
  CHECK(p.phi_pi == 1.0);
  CHECK(m.theta == 1.0);
}

TEST_CASE("sweep validation") {
  auto spec = small_sweep();
  spec.x.name = "nonsense";
  CHECK_THROWS_AS(validate_sweep(spec), std::invalid_argument);
  spec = small_sweep();
  spec.y.name = "phi_pi";
  CHECK_THROWS_AS(validate_sweep(spec), std::invalid_argument);
  spec = small_sweep();
  spec.x.steps = 1;
  CHECK_THROWS_AS(validate_sweep(spec), std::invalid_argument);
  spec = small_sweep();
  spec.y = {"R", -1.0, 1.0, 3};
  CHECK_THROWS_AS(validate_sweep(spec), std::invalid_argument);
  CHECK_NOTHROW(validate_sweep(small_sweep()));
}

TEST_CASE("shock preconditions and control subtraction") {
  ModelParams m;
  m.n_firms = 60;
  ShockSpec spec{0.02, 0.018, 600, 100, 100, 300, true};
  const auto r = monetary_shock(spec, m, {}, {1, 2});
  REQUIRE(r.lag.size() == 200);
  CHECK(r.lag.front() == -100);
  CHECK(r.lag.back() == 99);
  for (std::size_t i = 0; i < r.lag.size(); ++i) {
    if (r.lag[i] <= 0) CHECK(r.output_net[i] == 0.0);
  }

  auto late = spec;
  late.shock_time = 300;
  CHECK_THROWS_AS(monetary_shock(late, m, {}, {1}), std::invalid_argument);
  auto wide = spec;
  wide.window_before = 400;
  CHECK_THROWS_AS(monetary_shock(wide, m, {}, {1}), std::invalid_argument);
  PolicyParams taylor;
  taylor.phi_pi = 0.5;
  CHECK_THROWS_AS(monetary_shock(spec, m, taylor, {1}), std::invalid_argument);
}

TEST_CASE("constant-wage setting") {
  const auto m = constant_wage_model();
  CHECK(m.gamma_w == 0.0);
  CHECK(m.beta == 0.0);
  CHECK(m.theta == 5.0);
  CHECK(m.alpha_c == 0.0);
  CHECK(m.alpha_gamma == 0.0);
  const auto p = zero_rate_policy();
  CHECK(p.rho_star == 0.0);

  auto small = m;
  small.n_firms = 100;
  // Deep below the transition the economy collapses; far above it stays employed.
  CriticalSearch search;
  search.r_low = 0.3;
  search.r_high = 1.5;
  search.tolerance = 0.05;
  search.length = {8000, 4000};
  const double rc = locate_critical_r(small, p, search);
  CHECK(rc > 0.5);
  CHECK(rc < 1.2);
  search.r_low = 1.3;
  CHECK_THROWS_AS(locate_critical_r(small, p, search), std::runtime_error);
}
