#include "mark0/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "mark0/economy.hpp"
#include "mark0/experiments.hpp"
#include "mark0/io.hpp"
#include "mark0/rng.hpp"
#include "mark0/spectrum.hpp"

namespace mark0 {

InvariantReport check_invariants(const RunRecord& r, double money) {
  InvariantReport rep;
  double peak = money;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double drift = std::abs(r.money_drift[i]);
    peak = std::max(peak, r.savings[i] + r.firm_deposits[i] + r.firm_loans[i]);
    const double rel = drift / peak;
    if (drift > rep.max_abs_drift) {
      rep.max_abs_drift = drift;
      rep.worst_drift_step = r.t[i];
    }
    rep.max_rel_drift = std::max(rep.max_rel_drift, rel);
    if (r.total_deposits[i] > 0.0) {
      rep.max_rel_bank_profit =
          std::max(rep.max_rel_bank_profit, std::abs(r.bank_profit[i]) / r.total_deposits[i]);
    }
  }
  return rep;
}

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

CheckResult conservation_check(std::uint64_t seed) {
  struct Case {
    const char* label;
    double R, theta, rho_star, alpha;
  };
  // Representative phases at the baseline (rate channels off) plus the
  // default rate-sensitive economy.
  const Case cases[] = {
      {"FE", 2.0, 10.0, 0.0, 0.0},
      {"EC", 2.0, 1.0, 0.0, 0.0},
      {"RU", 2.0, 0.5, 0.0, 0.0},
      {"FU", 0.5, kInfinity, 0.0, 0.0},
      {"rates", 2.0, 3.0, 0.02, 1.0},
  };
  CheckResult res{"money conservation and bank no-profit", true, ""};
  for (const auto& c : cases) {
    ModelParams m;
    m.n_firms = 500;
    m.R = c.R;
    m.theta = c.theta;
    m.alpha_c = 4.0 * c.alpha;
    m.alpha_gamma = 50.0 * c.alpha;
    PolicyParams p;
    p.rho_star = c.rho_star;
    RunRecord rec;
    try {
      rec = run_simulation(m, p, 5000, seed);
    } catch (const std::exception& e) {
      res.passed = false;
      res.detail += std::string(c.label) + ": " + e.what() + "; ";
      continue;
    }
    const auto rep = check_invariants(rec, m.n_firms);
    const bool ok = rep.max_rel_drift <= kMoneyTolerance && rep.max_rel_bank_profit <= 1e-12;
    res.passed = res.passed && ok;
    res.detail += std::string(c.label) +
                  fmt(" drift=%.2g (rel %.2g) profit/X=%.2g; ", rep.max_abs_drift,
                      rep.max_rel_drift, rep.max_rel_bank_profit);
  }
  return res;
}

CheckResult recovery_check(std::uint64_t seed) {
  ModelParams m;
  m.n_firms = 500;
  m.alpha_c = 0.0;
  m.alpha_gamma = 0.0;
  m.gamma0 = 0.0;
  PolicyParams p;
  p.rho_star = 0.02;
  const auto rec = run_simulation(m, p, 3000, seed);
  bool ok = true;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    ok = ok && rec.gamma[i] == 0.0 && rec.propensity[i] == m.c0;
  }
  return {"rate channels off: Gamma = 0 and c = c0", ok,
          ok ? "constant over 3000 steps" : "Gamma or c moved"};
}

CheckResult residual_employment_check(std::uint64_t seed, unsigned jobs) {
  // Small-economy version of the collapse: the two Gamma0 curves must agree
  // with each other and with the oracle deep below the transition.
  ModelParams m = constant_wage_model();
  m.n_firms = 200;
  const PolicyParams p = zero_rate_policy();
  const RunLength length{60000, 40000};
  const std::vector<std::uint64_t> seeds{derive_seed(seed, {0}), derive_seed(seed, {1})};
  CriticalSearch search;
  search.r_low = 0.3;
  search.r_high = 1.5;
  search.tolerance = 0.02;
  search.length = {30000, 20000};
  search.seeds = seeds;
  const double rc = locate_critical_r(m, p, search, jobs);
  bool ok = true;
  std::string detail = fmt("R_c=%.3f; ", rc);
  for (double R : {0.3, 0.5}) {
    const double oracle = (rc - R) / (rc + R);
    double prev = 0.0;
    for (double g0 : {1e-3, 1e-4}) {
      const auto r = measure_residual_employment(m, p, R, g0, length, seeds, jobs);
      const double err = std::abs(r.rescaled - (oracle + g0)) / (oracle + g0);
      ok = ok && err < 0.15;
      if (prev > 0.0) ok = ok && std::abs(r.rescaled - prev) / prev < 0.10;
      prev = r.rescaled;
      detail += fmt("R=%.1f G0=%.0e: %.4f vs %.4f; ", R, g0, r.rescaled, oracle + g0);
    }
  }
  return {"residual employment collapse", ok, detail};
}

CheckResult ou_fit_check(std::uint64_t seed) {
  // AR(1) with a = exp(-omega0) has a Lorentzian spectrum at low frequency.
  const double omega0 = 0.01;
  const double a = std::exp(-omega0);
  std::mt19937_64 gen(splitmix64(seed));
  std::normal_distribution<double> noise;
  std::vector<double> x(1 << 17);
  double v = 0.0;
  for (double& xi : x) {
    v = a * v + noise(gen);
    xi = v;
  }
  const auto fit = fit_ou(power_spectrum(x, 0));
  std::vector<double> white(1 << 14);
  for (double& w : white) w = noise(gen);
  const auto flat = fit_ou(power_spectrum(white, 0));
  const bool ok = fit.ok() && std::abs(fit.omega0 / omega0 - 1.0) < 0.1 &&
                  flat.status == FitStatus::PinnedHigh;
  return {"OU fit sanity", ok,
          "AR(1) " + fit.diagnostics() + "; white noise " + flat.diagnostics()};
}

CheckResult determinism_check(std::uint64_t seed) {
  ModelParams m;
  m.n_firms = 300;
  const PolicyParams p;
  const auto a = format_timeseries(run_simulation(m, p, 2000, seed));
  const auto b = format_timeseries(run_simulation(m, p, 2000, seed));
  return {"determinism", a == b, a == b ? "identical CSV bytes" : "outputs differ"};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> results;
  auto record = [&](CheckResult r) {
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      record(fn());
    } catch (const std::exception& e) {
      record({name, false, e.what()});
    }
  };
  guarded("money conservation and bank no-profit", [&] { return conservation_check(options.seed); });
  guarded("rate channels off", [&] { return recovery_check(options.seed); });
  guarded("OU fit sanity", [&] { return ou_fit_check(options.seed); });
  guarded("determinism", [&] { return determinism_check(options.seed); });
  guarded("residual employment collapse",
          [&] { return residual_employment_check(options.seed, options.jobs); });
  return results;
}

}  // namespace mark0
