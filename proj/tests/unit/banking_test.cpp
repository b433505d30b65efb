#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mark0/banking.hpp"

using namespace mark0;

TEST_CASE("employment target is capped at 2.5% above the smoothed level") {
  CHECK(effective_employment_target(0.5, 0.95) == doctest::Approx(0.5125));
  CHECK(effective_employment_target(0.93, 0.95) == doctest::Approx(0.95));
}

TEST_CASE("Taylor rule") {
  PolicyParams p;
  p.rho_star = 0.02;
  p.phi_pi = 0.5;
  p.phi_eps = 0.5;
  p.pi_star = 0.002;
  p.eps_star = 0.95;
  CHECK(taylor_rate(0.003, 0.95, p) == doctest::Approx(0.025));

  // Below target employment the log term lowers the rate.
  const double e = 0.6;
  const double expected = 0.02 + 5 * (0.003 - 0.002) + 0.5 * std::log(e / (1.025 * e));
  CHECK(taylor_rate(0.003, e, p) == doctest::Approx(expected));

  // Deflationary slump: floored at zero.
  CHECK(taylor_rate(-0.05, 0.2, p) == 0.0);

  p.phi_pi = p.phi_eps = 0.0;
  CHECK(taylor_rate(0.5, 0.01, p) == 0.02);
}

TEST_CASE("bank rates satisfy the no-profit identity") {
  const auto r = bank_rates(0.02, 1.0, 100.0, 200.0, 0.5);
  CHECK(r.loan == doctest::Approx(0.025));
  CHECK(r.deposit == doctest::Approx(0.0075));
  CHECK(bank_profit(r, 1.0, 100.0, 200.0) == doctest::Approx(0.0).epsilon(1e-12));

  const auto neg = bank_rates(0.0, 3.0, 50.0, 120.0, 0.0);
  CHECK(neg.deposit == doctest::Approx(-3.0 / 120.0));
  CHECK(neg.deposit <= 0.0);

  // Without loans every default cost lands on deposits.
  const auto no_loans = bank_rates(0.01, 2.0, 0.0, 100.0, 0.5);
  CHECK(no_loans.deposit == doctest::Approx((0.01 * 0.0 - 2.0) / 100.0));
  CHECK(bank_profit(no_loans, 2.0, 0.0, 100.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(bank_rates(0.01, 0.0, 1.0, 0.0, 0.5), std::domain_error);

  for (double f : {0.0, 0.3, 1.0}) {
    for (double d : {0.0, 0.7, 12.0}) {
      const auto x = bank_rates(0.013, d, 37.0, 91.0, f);
      CHECK(std::abs(bank_profit(x, d, 37.0, 91.0)) <= 1e-12 * 91.0);
    }
  }
}

TEST_CASE("Gamma follows the real loan rate") {
  CHECK(gamma_sensitivity(0.03, 0.01, 50.0, 0.0) == doctest::Approx(1.0));
  CHECK(gamma_sensitivity(0.01, 0.03, 50.0, 0.0) == 0.0);
  CHECK(gamma_sensitivity(0.01, 0.03, 50.0, 0.2) == 0.2);
}

TEST_CASE("consumption budget") {
  const auto c = consumption_budget(100.0, 50.0, 0.005, 0.01, 0.005, 0.5, 4.0);
  CHECK(c.propensity == doctest::Approx(0.51));
  CHECK(c.budget == doctest::Approx(76.755));

  // Propensity is kept within [0, 1].
  CHECK(consumption_budget(1.0, 1.0, 0.0, 1.0, 0.0, 0.5, 4.0).propensity == 1.0);
  CHECK(consumption_budget(1.0, 1.0, 0.0, -1.0, 0.0, 0.5, 4.0).propensity == 0.0);
  CHECK(consumption_budget(10.0, 5.0, 0.0, 0.3, 0.1, 0.5, 0.0).propensity == 0.5);
}

TEST_CASE("EMA") {
  CHECK(ema_update(1.0, 2.0, 0.2) == doctest::Approx(1.2));
  double x = 0.0;
  for (int i = 0; i < 200; ++i) x = ema_update(x, 3.0, 0.2);
  CHECK(x == doctest::Approx(3.0));
}

TEST_CASE("logit demand") {
  std::vector<FirmState> firms(3);
  firms[0].price = 1.0;
  firms[1].price = 2.0;
  firms[2].price = 0.5;
  firms[1].active = false;
  const double spent = allocate_demand(10.0, firms, 1.0, 1.0);
  CHECK(spent == 10.0);
  CHECK(firms[1].demand == 0.0);
  // Budget shares exp(-beta p / pbar), quantities share / p.
  const double w0 = std::exp(-1.0), w2 = std::exp(-0.5);
  CHECK(firms[0].demand == doctest::Approx(10.0 * w0 / (w0 + w2) / 1.0));
  CHECK(firms[2].demand == doctest::Approx(10.0 * w2 / (w0 + w2) / 0.5));

  firms[1].active = true;
  allocate_demand(6.0, firms, 1e6, 1.0);
  CHECK(firms[2].demand == doctest::Approx(12.0));
  CHECK(firms[0].demand == 0.0);
  CHECK(firms[1].demand == 0.0);

  for (auto& f : firms) f.active = false;
  CHECK(allocate_demand(6.0, firms, 1.0, 1.0) == 0.0);
}
