#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "mark0/observables.hpp"

using namespace mark0;

TEST_CASE("production-weighted price and employment") {
  std::vector<FirmState> firms(2);
  firms[0].price = 1.0;
  firms[0].production = 3.0;
  firms[1].price = 3.0;
  firms[1].production = 1.0;
  CHECK(*average_price(firms) == doctest::Approx(1.5));
  CHECK(employment_rate(firms) == 1.0);  // clamped: 4 workers, 2 firms

  firms[0].production = 0.2;
  firms[1].production = 0.0;
  CHECK(employment_rate(firms) == doctest::Approx(0.1));
  const auto agg = aggregates(firms);
  CHECK(agg.employment == doctest::Approx(0.1));
  CHECK(*agg.avg_price == doctest::Approx(1.0));

  firms[0].production = 0.0;
  CHECK(*average_price(firms) == doctest::Approx(2.0));  // plain mean
  firms[0].active = firms[1].active = false;
  CHECK_FALSE(average_price(firms).has_value());
  CHECK_FALSE(average_wage(firms).has_value());
  CHECK_THROWS_AS(weighted_price_and_inflation(firms, 1.0), std::invalid_argument);
}

TEST_CASE("inflation") {
  std::vector<FirmState> firms(1);
  firms[0].price = 1.1;
  firms[0].production = 1.0;
  CHECK(weighted_price_and_inflation(firms, 1.0).inflation == doctest::Approx(0.1));
  CHECK(weighted_price_and_inflation(firms, std::nullopt).inflation == 0.0);
}

TEST_CASE("phase labels") {
  RunSummary s;
  s.mean_u = 0.02;
  s.amplitude = 0.01;
  s.mean_pi = 0.001;
  CHECK(classify_phase(s) == Phase::FE);
  s = {0.9, 0.05, -0.001, 0.0, Phase::RU};
  CHECK(classify_phase(s) == Phase::FU);
  s = {0.3, 0.05, 0.0, 0.0, Phase::FE};
  CHECK(classify_phase(s) == Phase::RU);
  s = {0.3, 0.7, 0.0, 0.0, Phase::FE};
  CHECK(classify_phase(s) == Phase::EC);

  const std::vector<Phase> tie{Phase::FE, Phase::EC};
  CHECK(majority_phase(tie) == Phase::EC);
  const std::vector<Phase> labels{Phase::RU, Phase::FE, Phase::RU};
  CHECK(majority_phase(labels) == Phase::RU);
  for (auto ph : {Phase::FE, Phase::FU, Phase::EC, Phase::RU}) {
    CHECK(parse_phase(phase_name(ph)) == ph);
  }
}

TEST_CASE("summaries over the window") {
  RunRecord r;
  for (int t = 0; t < 10; ++t) {
    StepRecord row;
    row.t = t + 1;
    row.u = t < 5 ? 0.9 : 0.2 + 0.02 * (t - 5);
    row.epsilon = 1.0 - row.u;
    row.pi = 0.001;
    r.append(row);
  }
  const auto s = summarize(r, 5);
  CHECK(s.mean_u == doctest::Approx(0.24));
  CHECK(s.amplitude == doctest::Approx(0.08));
  CHECK(s.mean_pi == doctest::Approx(0.001));
  CHECK(cycle_amplitude(r.u, 5) == doctest::Approx(0.08));
  CHECK_THROWS(cycle_amplitude(r.u, 10));
}

TEST_CASE("residual employment oracle") {
  CHECK(residual_employment_oracle(0.5, 1.0, 1e-3) == doctest::Approx(2.99e-3).epsilon(1e-3));
  CHECK(residual_employment_oracle(1.0, 1.0, 1e-3) == 1.0);
  CHECK(residual_employment_oracle(0.5, 1.0, 1e-9) < 1e-8);
  CHECK(residual_employment_oracle(0.99, 1.0, 1e-3) > residual_employment_oracle(0.5, 1.0, 1e-3));
}
