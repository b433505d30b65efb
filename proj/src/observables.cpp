#include "mark0/observables.hpp"

#include <algorithm>
#include <stdexcept>

namespace mark0 {

namespace {

std::optional<double> weighted_mean(std::span<const FirmState> firms,
                                    double FirmState::*field) {
  double num = 0.0;
  double den = 0.0;
  double plain = 0.0;
  std::size_t active = 0;
  for (const auto& f : firms) {
    if (!f.active) continue;
    num += f.*field * f.production;
    den += f.production;
    plain += f.*field;
    ++active;
  }
  if (active == 0) return std::nullopt;
  if (den > 0.0) return num / den;
  return plain / static_cast<double>(active);
}

}  // namespace

double employment_rate(std::span<const FirmState> firms) {
  if (firms.empty()) return 0.0;
  double total = 0.0;
  for (const auto& f : firms) {
    if (f.active) total += f.production;
  }
  return std::clamp(total / static_cast<double>(firms.size()), 0.0, 1.0);
}

std::optional<double> average_price(std::span<const FirmState> firms) {
  return weighted_mean(firms, &FirmState::price);
}

std::optional<double> average_wage(std::span<const FirmState> firms) {
  return weighted_mean(firms, &FirmState::wage);
}

Aggregates aggregates(std::span<const FirmState> firms) {
  Aggregates out;
  if (firms.empty()) return out;
  double y = 0.0, py = 0.0, wy = 0.0, p = 0.0, w = 0.0;
  std::size_t active = 0;
  for (const auto& f : firms) {
    if (!f.active) continue;
    y += f.production;
    py += f.price * f.production;
    wy += f.wage * f.production;
    p += f.price;
    w += f.wage;
    ++active;
  }
  out.employment = std::clamp(y / static_cast<double>(firms.size()), 0.0, 1.0);
  if (active == 0) return out;
  if (y > 0.0) {
    out.avg_price = py / y;
    out.avg_wage = wy / y;
  } else {
    out.avg_price = p / static_cast<double>(active);
    out.avg_wage = w / static_cast<double>(active);
  }
  return out;
}

PriceLevel weighted_price_and_inflation(std::span<const FirmState> firms,
                                        std::optional<double> prev_avg_price) {
  const auto p = average_price(firms);
  if (!p) throw std::invalid_argument("weighted_price_and_inflation: no active firm");
  PriceLevel out{*p, 0.0};
  if (prev_avg_price) out.inflation = (*p - *prev_avg_price) / *prev_avg_price;
  return out;
}

void RunRecord::reserve(std::size_t n) {
  t.reserve(n);
  for (auto* v : {&u, &epsilon, &pi, &rho0, &rho_l, &rho_d, &pbar, &wbar, &savings,
                  &firm_deposits, &firm_loans, &defaults, &bankruptcies, &gamma,
                  &propensity, &money_drift, &bank_profit, &total_deposits}) {
    v->reserve(n);
  }
}

void RunRecord::append(const StepRecord& r) {
  t.push_back(r.t);
  u.push_back(r.u);
  epsilon.push_back(r.epsilon);
  pi.push_back(r.pi);
  rho0.push_back(r.rho0);
  rho_l.push_back(r.rho_l);
  rho_d.push_back(r.rho_d);
  pbar.push_back(r.pbar);
  wbar.push_back(r.wbar);
  savings.push_back(r.savings);
  firm_deposits.push_back(r.firm_deposits);
  firm_loans.push_back(r.firm_loans);
  defaults.push_back(r.defaults);
  bankruptcies.push_back(r.bankruptcies);
  gamma.push_back(r.gamma);
  propensity.push_back(r.propensity);
  money_drift.push_back(r.money_drift);
  bank_profit.push_back(r.bank_profit);
  total_deposits.push_back(r.total_deposits);
}

StepRecord RunRecord::row(std::size_t i) const {
  StepRecord r;
  r.t = t.at(i);
  r.u = u[i];
  r.epsilon = epsilon[i];
  r.pi = pi[i];
  r.rho0 = rho0[i];
  r.rho_l = rho_l[i];
  r.rho_d = rho_d[i];
  r.pbar = pbar[i];
  r.wbar = wbar[i];
  r.savings = savings[i];
  r.firm_deposits = firm_deposits[i];
  r.firm_loans = firm_loans[i];
  r.defaults = defaults[i];
  r.bankruptcies = bankruptcies[i];
  r.gamma = gamma[i];
  r.propensity = propensity[i];
  if (i < money_drift.size()) r.money_drift = money_drift[i];
  if (i < bank_profit.size()) r.bank_profit = bank_profit[i];
  if (i < total_deposits.size()) r.total_deposits = total_deposits[i];
  return r;
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::FE: return "FE";
    case Phase::FU: return "FU";
    case Phase::EC: return "EC";
    case Phase::RU: return "RU";
  }
  return "RU";
}

Phase parse_phase(std::string_view name) {
  for (Phase p : {Phase::FE, Phase::FU, Phase::EC, Phase::RU}) {
    if (phase_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown phase label '" + std::string(name) + "'");
}

double cycle_amplitude(std::span<const double> series, std::size_t t_eq) {
  if (t_eq >= series.size()) {
    throw std::invalid_argument("cycle_amplitude: empty measurement window");
  }
  const auto [lo, hi] = std::minmax_element(series.begin() + static_cast<std::ptrdiff_t>(t_eq),
                                            series.end());
  return *hi - *lo;
}

RunSummary summarize(const RunRecord& record, std::size_t t_eq,
                     const PhaseThresholds& thresholds) {
  const std::size_t n = record.size();
  if (t_eq >= n) throw std::invalid_argument("summarize: empty measurement window");
  const double count = static_cast<double>(n - t_eq);
  RunSummary s;
  double sum_eps = 0.0;
  double sum_eps2 = 0.0;
  for (std::size_t i = t_eq; i < n; ++i) {
    s.mean_u += record.u[i];
    s.mean_pi += record.pi[i];
    sum_eps += record.epsilon[i];
  }
  s.mean_u /= count;
  s.mean_pi /= count;
  const double mean_eps = sum_eps / count;
  for (std::size_t i = t_eq; i < n; ++i) {
    const double d = record.epsilon[i] - mean_eps;
    sum_eps2 += d * d;
  }
  s.var_epsilon = sum_eps2 / count;
  s.amplitude = cycle_amplitude(record.u, t_eq);
  s.phase = classify_phase(s, thresholds);
  return s;
}

Phase classify_phase(const RunSummary& s, const PhaseThresholds& th) {
  if (s.amplitude >= th.crisis_min_amplitude) return Phase::EC;
  if (s.mean_u > th.full_unemployment_min_u && s.mean_pi < 0.0) return Phase::FU;
  if (s.mean_u < th.full_employment_max_u) return Phase::FE;
  return Phase::RU;
}

Phase majority_phase(std::span<const Phase> labels) {
  if (labels.empty()) throw std::invalid_argument("majority_phase: no labels");
  constexpr std::array<Phase, 4> order = {Phase::EC, Phase::FU, Phase::FE, Phase::RU};
  Phase best = Phase::RU;
  std::ptrdiff_t best_count = -1;
  for (Phase p : order) {
    const auto c = std::count(labels.begin(), labels.end(), p);
    if (c > best_count) {
      best = p;
      best_count = c;
    }
  }
  return best;
}

double residual_employment_oracle(double R, double R_c, double gamma0) {
  if (R >= R_c) return 1.0;
  return gamma0 / ((R_c - R) / (R_c + R) + gamma0);
}

}  // namespace mark0
