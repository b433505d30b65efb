#include "mark0/economy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mark0 {

namespace {

EconomyState init_with(const ModelParams& params, std::uint64_t seed,
                       const std::function<double()>* draw) {
  params.validate();
  EconomyState s;
  s.rng = Rng(seed);
  auto xi = [&]() { return draw ? (*draw)() : s.rng.uniform(); };

  const auto n = static_cast<std::size_t>(params.n_firms);
  s.firms.resize(n);
  s.max_hires.assign(n, 0.0);
  double total_cash = 0.0;
  for (auto& f : s.firms) {
    f.wage = 1.0;
    f.price = 1.0 + 0.2 * (xi() - 0.5);
    f.production = (1.0 + 0.2 * (xi() - 0.5)) / 2.0;
    f.demand = 0.5;
    f.cash = f.wage * f.production * xi();
    f.profit = f.price * std::min(f.demand, f.production) - f.payroll();
    f.active = true;
    total_cash += f.cash;
  }
  s.money = static_cast<double>(params.n_firms);
  s.households.savings = s.money - total_cash;
  s.households.propensity = params.c0;
  for (const auto& f : s.firms) s.households.total_wages += f.payroll();

  s.bank.firm_deposits = total_cash;
  s.bank.total_deposits = s.households.savings + total_cash;

  s.prev_avg_price = average_price(s.firms).value_or(1.0);
  s.last_avg_wage = average_wage(s.firms).value_or(1.0);
  s.smoothed.unemployment = 1.0 - employment_rate(s.firms);
  return s;
}

struct CashTotals {
  double deposits = 0.0;
  double loans = 0.0;
};

CashTotals cash_totals(std::span<const FirmState> firms) {
  CashTotals c;
  for (const auto& f : firms) {
    if (!f.active) continue;
    if (f.cash > 0.0) c.deposits += f.cash;
    else c.loans -= f.cash;
  }
  return c;
}

}  // namespace

EconomyState init_economy(const ModelParams& params, std::uint64_t seed) {
  return init_with(params, seed, nullptr);
}

EconomyState init_economy(const ModelParams& params, std::uint64_t seed,
                          const std::function<double()>& draw) {
  return init_with(params, seed, &draw);
}

BankruptcyOutcome resolve_bankruptcies(std::span<FirmState> firms, double theta) {
  BankruptcyOutcome out;
  const bool bounded = std::isfinite(theta);
  for (auto& f : firms) {
    if (!f.active) continue;
    if (bounded && f.cash <= -theta * f.payroll()) {
      out.default_costs -= f.cash;
      ++out.count;
      f.active = false;
      f.cash = 0.0;
      f.production = 0.0;
      f.demand = 0.0;
      f.profit = 0.0;
      continue;
    }
    if (f.cash > 0.0) out.firm_deposits += f.cash;
    else out.loans -= f.cash;
  }
  return out;
}

void allocate_workforce(std::span<const FirmState> firms, double beta, double unemployment,
                        double avg_wage, std::span<double> out) {
  double max_wage = -std::numeric_limits<double>::infinity();
  for (const auto& f : firms) {
    if (f.active) max_wage = std::max(max_wage, f.wage);
  }
  if (!std::isfinite(max_wage)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double scale = beta / avg_wage;
  double norm = 0.0;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    out[i] = firms[i].active ? std::exp(scale * (firms[i].wage - max_wage)) : 0.0;
    norm += out[i];
  }
  const double pool = static_cast<double>(firms.size()) * unemployment;
  for (double& x : out) x = pool * x / norm;
}

std::vector<double> allocate_workforce(std::span<const FirmState> firms, double beta,
                                       double unemployment, double avg_wage) {
  std::vector<double> out(firms.size(), 0.0);
  allocate_workforce(firms, beta, unemployment, avg_wage, out);
  return out;
}

std::vector<std::size_t> revive_firms(EconomyState& state, const RevivalContext& ctx) {
  auto& firms = state.firms;
  const double lenders = cash_totals(firms).deposits;
  double injected = 0.0;
  std::vector<std::size_t> revived;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    if (firms[i].active) continue;
    if (!(state.rng.uniform() < ctx.probability)) continue;
    const double production = ctx.unemployment * state.rng.uniform();
    const double cash = ctx.avg_wage * production;
    if (injected + cash > lenders) break;
    auto& f = firms[i];
    f.active = true;
    f.price = ctx.avg_price;
    f.wage = ctx.avg_wage;
    f.production = production;
    f.cash = cash;
    f.demand = 0.0;
    f.profit = 0.0;
    injected += cash;
    revived.push_back(i);
  }
  if (injected > 0.0) {
    std::size_t next = 0;
    for (std::size_t i = 0; i < firms.size(); ++i) {
      if (next < revived.size() && revived[next] == i) {
        ++next;
        continue;
      }
      auto& f = firms[i];
      if (f.active && f.cash > 0.0) f.cash -= injected * f.cash / lenders;
    }
  }
  return revived;
}

double money_conservation_check(const EconomyState& state) {
  const auto c = cash_totals(state.firms);
  return state.households.savings + c.deposits - c.loans - state.money;
}

StepRecord step(EconomyState& state, const ModelParams& model, const PolicyParams& policy) {
  auto& firms = state.firms;
  auto& hh = state.households;
  auto& bank = state.bank;
  auto& sm = state.smoothed;
  ++state.t;

  // Macro snapshot at the start of the step.
  const auto start = aggregates(firms);
  const double unemployment = 1.0 - start.employment;
  const double avg_price = start.avg_price.value_or(state.prev_avg_price);
  const double avg_wage = start.avg_wage.value_or(state.last_avg_wage);
  state.max_hires.resize(firms.size());
  allocate_workforce(firms, model.beta, unemployment, avg_wage, state.max_hires);

  sm.inflation = ema_update(sm.inflation, state.inflation, policy.omega);
  sm.deposit_rate = ema_update(sm.deposit_rate, bank.deposit_rate, policy.omega);
  sm.loan_rate = ema_update(sm.loan_rate, bank.loan_rate, policy.omega);
  sm.unemployment = ema_update(sm.unemployment, unemployment, policy.omega);

  // Central Bank.
  bank.base_rate = taylor_rate(sm.inflation, sm.employment(), policy);
  state.gamma = gamma_sensitivity(sm.loan_rate, sm.inflation, model.alpha_gamma, model.gamma0);
  const double gamma = state.gamma;

  // Defaults, then firm updates from start-of-step values.
  const auto outcome = resolve_bankruptcies(firms, model.theta);
  WageContext wage_ctx;
  wage_ctx.gamma = gamma;
  wage_ctx.unemployment = unemployment;
  wage_ctx.gamma_w = model.gamma_w;
  wage_ctx.deposit_rate = bank.deposit_rate;
  wage_ctx.loan_rate = bank.loan_rate;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    auto& f = firms[i];
    if (!f.active) continue;
    const FirmState before = f;
    const double phi = fragility(before, gamma);
    const auto rates = reaction_rates(phi, gamma, model.eta_minus, model.R);
    if (wage_responds(before)) {
      wage_ctx.fragility = phi;
      f.wage = update_wage(before, wage_ctx, state.rng.uniform());
    }
    f.production = update_production(before, state.max_hires[i], rates);
    if (price_responds(before, avg_price)) {
      f.price = update_price(before, avg_price, model.gamma_p, state.rng.uniform());
    }
  }

  // Refresh u and pbar after the updates; pbar defines this step's inflation.
  const auto post = aggregates(firms);
  const double post_unemployment = 1.0 - post.employment;
  double post_price = state.prev_avg_price;
  state.inflation = 0.0;
  if (post.avg_price) {
    post_price = *post.avg_price;
    state.inflation = (post_price - state.prev_avg_price) / state.prev_avg_price;
  }
  state.prev_avg_price = post_price;
  const double post_wage = post.avg_wage.value_or(avg_wage);
  state.last_avg_wage = post_wage;

  // Private bank sets rates.
  bank.default_costs = outcome.default_costs;
  bank.total_loans = outcome.loans;
  bank.firm_deposits = outcome.firm_deposits;
  bank.total_deposits = hh.savings + outcome.firm_deposits;
  if (!(bank.total_deposits > 0.0)) {
    throw ConsistencyError(state.t, "banking system fully drained (total deposits <= 0)");
  }
  const auto rates = bank_rates(bank.base_rate, bank.default_costs, bank.total_loans,
                                bank.total_deposits, model.f);
  bank.loan_rate = rates.loan;
  bank.deposit_rate = rates.deposit;

  // Households.
  hh.total_wages = 0.0;
  for (const auto& f : firms) {
    if (f.active) hh.total_wages += f.payroll();
  }
  const auto cb = consumption_budget(hh.savings, hh.total_wages, bank.deposit_rate,
                                     sm.inflation, sm.deposit_rate, model.c0, model.alpha_c);
  hh.propensity = cb.propensity;
  hh.consumption_budget = cb.budget;
  hh.savings = (1.0 + bank.deposit_rate) * hh.savings + hh.total_wages;
  allocate_demand(cb.budget, firms, model.beta, post_price);

  // Accounting and dividends.
  for (auto& f : firms) {
    if (!f.active) continue;
    const auto acc = firm_accounting(f, bank.deposit_rate, bank.loan_rate, model.delta);
    hh.savings += acc.dividend - f.price * std::min(f.production, f.demand);
    f.cash = acc.cash;
    f.profit = acc.profit;
  }

  RevivalContext revival{post_unemployment, post_price, post_wage, model.revival};
  revive_firms(state, revival);

  StepRecord row;
  row.t = state.t;
  row.epsilon = employment_rate(firms);
  row.u = 1.0 - row.epsilon;
  row.pi = state.inflation;
  row.rho0 = bank.base_rate;
  row.rho_l = bank.loan_rate;
  row.rho_d = bank.deposit_rate;
  row.pbar = post_price;
  row.wbar = post_wage;
  row.savings = hh.savings;
  const auto totals = cash_totals(firms);
  row.firm_deposits = totals.deposits;
  row.firm_loans = totals.loans;
  row.defaults = outcome.default_costs;
  row.bankruptcies = outcome.count;
  row.gamma = gamma;
  row.propensity = hh.propensity;
  row.money_drift = hh.savings + totals.deposits - totals.loans - state.money;
  row.bank_profit = bank_profit(rates, bank.default_costs, bank.total_loans, bank.total_deposits);
  row.total_deposits = bank.total_deposits;
  state.peak_balance =
      std::max({state.peak_balance, state.money, hh.savings + totals.deposits + totals.loans});
  if (!(std::abs(row.money_drift) <= kMoneyTolerance * state.peak_balance)) {
    throw ConsistencyError(state.t, "money drift " + std::to_string(row.money_drift) +
                                        " exceeds tolerance");
  }
  return row;
}

}  // namespace mark0
