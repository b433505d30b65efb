#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mark0/spectrum.hpp"

using namespace mark0;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (double& v : x) v = d(gen);
  return x;
}

std::vector<double> ar1(std::size_t n, double a, std::uint64_t seed) {
  auto x = gaussian(n, seed);
  for (std::size_t i = 1; i < n; ++i) x[i] += a * x[i - 1];
  return x;
}

}  // namespace

TEST_CASE("periodogram matches a naive DFT") {
  const auto x = gaussian(1500, 1);  // truncated to 1024 after skipping 100
  const auto s = power_spectrum(x, 100);
  const std::size_t n = 1024;
  REQUIRE(s.length == n);
  REQUIRE(s.power.size() == n / 2);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[100 + i] / n;
  for (std::size_t k : {1u, 2u, 17u, 200u, 512u}) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += (x[100 + i] - mean) * std::polar(1.0, -2.0 * std::numbers::pi * k * i / n);
    }
    CHECK(s.omega[k - 1] == doctest::Approx(2.0 * std::numbers::pi * k / n));
    CHECK(s.power[k - 1] == doctest::Approx(std::norm(acc) / n).epsilon(1e-9));
  }
}

TEST_CASE("too short a series is rejected") {
  const auto x = gaussian(2000, 2);
  CHECK_THROWS_AS(power_spectrum(x, 1000), std::invalid_argument);
  CHECK_THROWS_AS(power_spectrum(x, 5000), std::invalid_argument);
}

TEST_CASE("AR(1) periodogram follows its analytic spectrum") {
  const double a = 0.9;
  const auto s = smooth_log_spectrum(power_spectrum(ar1(1 << 16, a, 3), 0), 101);
  // Log-averaging underestimates by e^-gamma.
  for (std::size_t k = 500; k < s.power.size(); k += 3000) {
    const double w = s.omega[k];
    const double exact = 1.0 / (1.0 - 2.0 * a * std::cos(w) + a * a);
    CHECK(s.power[k] * std::exp(std::numbers::egamma) == doctest::Approx(exact).epsilon(0.15));
  }
}

TEST_CASE("Lorentzian fit recovers a synthetic OU spectrum") {
  Spectrum s;
  const std::size_t n = 1 << 16;
  s.length = n;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double w = 2.0 * std::numbers::pi * k / n;
    s.omega.push_back(w);
    s.power.push_back(ou_spectrum(w, 3.0, 0.01));
  }
  OuFitOptions opt;
  opt.periodogram_bias = false;
  const auto fit = fit_ou(s, opt);
  CHECK(fit.ok());
  CHECK(fit.omega0 == doctest::Approx(0.01).epsilon(0.1));
  CHECK(fit.i0 == doctest::Approx(3.0).epsilon(0.1));
  CHECK(fit.residual < 1e-3);
}

TEST_CASE("OU fit on AR(1) samples") {
  const double omega0 = 0.01;
  const auto x = ar1(1 << 17, std::exp(-omega0), 4);
  const auto fit = fit_ou(power_spectrum(x, 0));
  CHECK(fit.ok());
  CHECK(fit.omega0 == doctest::Approx(omega0).epsilon(0.1));

  // Scaling the series scales I0 by the square and leaves omega0 alone.
  auto y = x;
  for (double& v : y) v *= 3.0;
  const auto scaled = fit_ou(power_spectrum(y, 0));
  CHECK(scaled.omega0 == doctest::Approx(fit.omega0).epsilon(1e-6));
  CHECK(scaled.i0 == doctest::Approx(9.0 * fit.i0).epsilon(1e-6));
}

TEST_CASE("fit status flags") {
  const auto flat = fit_ou(power_spectrum(gaussian(1 << 14, 5), 0));
  CHECK(flat.status == FitStatus::PinnedHigh);
  CHECK_FALSE(flat.ok());

  // A random walk has no corner inside the band.
  auto walk = gaussian(1 << 14, 6);
  for (std::size_t i = 1; i < walk.size(); ++i) walk[i] += walk[i - 1];
  CHECK(fit_ou(power_spectrum(walk, 0)).status == FitStatus::PinnedLow);

  auto bad = power_spectrum(gaussian(1 << 12, 7), 0);
  bad.power[10] = 0.0;
  CHECK(fit_ou(bad).status == FitStatus::InvalidInput);

  OuFitOptions narrow;
  narrow.max_omega = 1e-3;
  CHECK(fit_ou(power_spectrum(gaussian(1 << 12, 8), 0), narrow).status ==
        FitStatus::TooFewPoints);
  CHECK(fit_status_name(FitStatus::PinnedLow) == "pinned-low");
}
