#include <doctest.h>

#include <cmath>
#include <vector>

#include "mark0/economy.hpp"

using namespace mark0;

namespace {

EconomyState desk_state(const ModelParams& m, std::uint64_t seed) {
  return init_economy(m, seed, [] { return 0.5; });
}

ModelParams desk_model() {
  ModelParams m;
  m.n_firms = 1;
  m.alpha_c = 0.0;
  m.alpha_gamma = 0.0;
  return m;
}

}  // namespace

TEST_CASE("initial state") {
  const auto s = desk_state(desk_model(), 7);
  REQUIRE(s.firms.size() == 1);
  const auto& f = s.firms[0];
  CHECK(f.wage == 1.0);
  CHECK(f.price == 1.0);
  CHECK(f.production == 0.5);
  CHECK(f.demand == 0.5);
  CHECK(f.cash == 0.25);
  CHECK(s.households.savings == 0.75);
  CHECK(money_conservation_check(s) == 0.0);

  ModelParams big;
  const auto b = init_economy(big, 3);
  CHECK(std::abs(money_conservation_check(b)) < 1e-9);
  CHECK(b.money == 2000.0);
}

TEST_CASE("bankruptcy") {
  std::vector<FirmState> firms(2);
  firms[0].cash = -5.0;
  firms[0].production = 2.0;
  firms[1].cash = 3.0;
  firms[1].production = 1.0;
  const auto out = resolve_bankruptcies(firms, 2.0);
  CHECK(out.count == 1);
  CHECK(out.default_costs == 5.0);
  CHECK_FALSE(firms[0].active);
  CHECK(firms[0].cash == 0.0);
  CHECK(out.firm_deposits == 3.0);
  CHECK(out.loans == 0.0);

  firms[0] = FirmState{};
  firms[0].cash = -1e9;
  firms[0].production = 1.0;
  CHECK(resolve_bankruptcies(firms, kInfinity).count == 0);
}

TEST_CASE("workforce allocation") {
  std::vector<FirmState> firms(3);
  firms[0].wage = 1.0;
  firms[1].wage = 1.2;
  firms[2].wage = 0.8;
  const auto even = allocate_workforce(firms, 0.0, 0.3, 1.0);
  for (double x : even) CHECK(x == doctest::Approx(0.3));

  const auto greedy = allocate_workforce(firms, 1e6, 0.3, 1.0);
  CHECK(greedy[1] == doctest::Approx(0.9));
  CHECK(greedy[0] == 0.0);

  firms[1].active = false;
  const auto some = allocate_workforce(firms, 2.0, 0.5, 1.0);
  CHECK(some[1] == 0.0);
  CHECK(some[0] + some[2] == doctest::Approx(1.5));
}

TEST_CASE("revival takes the injection from cash-rich firms") {
  ModelParams m;
  m.n_firms = 2;
  auto s = init_economy(m, 11);
  s.firms[0].active = false;
  s.firms[0].cash = 0.0;
  s.firms[0].production = 0.0;
  s.firms[1].cash = 5.0;
  const double before = s.households.savings + s.firms[1].cash;
  RevivalContext ctx{0.4, 1.3, 1.0, 1.0};
  const auto revived = revive_firms(s, ctx);
  REQUIRE(revived.size() == 1);
  const auto& f = s.firms[0];
  CHECK(f.active);
  CHECK(f.price == 1.3);
  CHECK(f.wage == 1.0);
  CHECK(f.production >= 0.0);
  CHECK(f.production <= 0.4);
  CHECK(f.cash == doctest::Approx(f.production));
  CHECK(f.demand == 0.0);
  CHECK(f.profit == 0.0);
  CHECK(s.firms[1].cash == doctest::Approx(5.0 - f.cash));
  CHECK(s.households.savings + s.firms[1].cash + f.cash == doctest::Approx(before));
}

TEST_CASE("one-firm desk trace") {
  const auto m = desk_model();
  PolicyParams p;  // rho* = 2%, no feedback
  const std::uint64_t seed = 5;
  auto s = desk_state(m, seed);

  // Step 1: Y = D, so nothing moves and no random draw is consumed.
  const auto r1 = step(s, m, p);
  CHECK(r1.rho0 == doctest::Approx(0.02));
  CHECK(r1.rho_l == doctest::Approx(0.02));
  CHECK(r1.rho_d == 0.0);
  CHECK(r1.pi == 0.0);
  CHECK(r1.u == doctest::Approx(0.5));
  CHECK(s.firms[0].demand == doctest::Approx(0.625));  // c0 (S + W_T) / p
  CHECK(s.firms[0].cash == doctest::Approx(0.25));
  CHECK(r1.savings == doctest::Approx(0.75));
  CHECK(r1.money_drift == 0.0);
  CHECK(r1.propensity == 0.5);
  CHECK(r1.gamma == 0.0);

  // Step 2: underproducing at exactly the average price with zero profit:
  // hire only; neither the wage nor the price rule fires.
  const auto r2 = step(s, m, p);
  const double Y = 0.5 + 0.2 * 0.125;
  const auto& f = s.firms[0];
  CHECK(f.production == doctest::Approx(Y));
  CHECK(f.wage == 1.0);
  CHECK(f.price == 1.0);
  CHECK(r2.pi == 0.0);
  CHECK(r2.u == doctest::Approx(1.0 - Y));
  CHECK(f.demand == doctest::Approx(0.5 * (0.75 + Y)));
  CHECK(f.profit == doctest::Approx(0.0));
  CHECK(f.cash == doctest::Approx(0.25));
  CHECK(r2.savings == doctest::Approx(0.75));
  CHECK(s.rng == Rng(seed));  // no draw consumed so far
  CHECK(std::abs(r2.money_drift) < 1e-15);
}

TEST_CASE("same seed, same trajectory") {
  ModelParams m;
  m.n_firms = 50;
  PolicyParams p;
  auto a = init_economy(m, 9);
  auto b = init_economy(m, 9);
  for (int t = 0; t < 200; ++t) {
    step(a, m, p);
    step(b, m, p);
  }
  CHECK(a == b);
  auto c = init_economy(m, 10);
  for (int t = 0; t < 200; ++t) step(c, m, p);
  CHECK_FALSE(a == c);
}

TEST_CASE("money and no-profit invariants over a run") {
  ModelParams m;
  m.n_firms = 200;
  m.theta = 1.5;
  PolicyParams p;
  p.phi_pi = 0.5;
  p.phi_eps = 0.5;
  auto s = init_economy(m, 4);
  for (int t = 0; t < 3000; ++t) {
    const auto r = step(s, m, p);
    REQUIRE(std::abs(r.money_drift) < 1e-6 * m.n_firms);
    REQUIRE(std::abs(r.bank_profit) <= 1e-12 * r.total_deposits);
    REQUIRE(r.rho0 >= 0.0);
    REQUIRE(r.u >= 0.0);
    REQUIRE(r.u <= 1.0);
  }
}
