#pragma once

#include <span>

#include "mark0/firm.hpp"
#include "mark0/params.hpp"

namespace mark0 {

/// Employment rate used by the Taylor rule is floored here so log() stays finite
/// in a fully collapsed economy.
inline constexpr double kMinSmoothedEmployment = 1e-3;

/// Exponential moving averages of the policy inputs, each updated once per step.
struct SmoothedMacro {
  double inflation = 0.0;
  double deposit_rate = 0.0;
  double loan_rate = 0.0;
  double unemployment = 0.0;

  double employment() const { return 1.0 - unemployment; }

  friend bool operator==(const SmoothedMacro&, const SmoothedMacro&) = default;
};

inline double ema_update(double smoothed, double value, double omega) {
  return omega * value + (1.0 - omega) * smoothed;
}

/// One-step employment target: at most 2.5% above the smoothed employment.
double effective_employment_target(double smoothed_employment, double eps_star);

/// Base rate rho0 = max(rho* + 10 phi_pi (pi~ - pi*) + phi_eps log(eps~ / eps^*), 0).
double taylor_rate(double smoothed_inflation, double smoothed_employment,
                   const PolicyParams& policy);

struct BankRates {
  double loan = 0.0;
  double deposit = 0.0;
};

/// No-profit loan and deposit rates. A share f of the default costs goes on
/// loans, the remainder on deposits; with no outstanding loans every default
/// cost is charged to deposits. Throws std::domain_error if deposits <= 0.
BankRates bank_rates(double base_rate, double default_costs, double loans,
                     double deposits, double f);

/// rho^l E- - rho^d X - D; zero up to rounding for rates from bank_rates().
inline double bank_profit(BankRates rates, double default_costs, double loans,
                          double deposits) {
  return rates.loan * loans - rates.deposit * deposits - default_costs;
}

/// Gamma = max(alpha_Gamma (rho~l - pi~), Gamma0).
double gamma_sensitivity(double smoothed_loan_rate, double smoothed_inflation,
                         double alpha_gamma, double gamma0);

struct ConsumptionBudget {
  double propensity = 0.0;  // c, clamped to [0, 1]
  double budget = 0.0;      // C_B
};

ConsumptionBudget consumption_budget(double savings, double total_wages,
                                     double deposit_rate, double smoothed_inflation,
                                     double smoothed_deposit_rate, double c0,
                                     double alpha_c);

/// Logit split of the consumption budget over active firms' prices. Writes D
/// into each firm; inactive firms get zero. Returns the budget actually
/// allocated (0 when no firm is active).
double allocate_demand(double budget, std::span<FirmState> firms, double beta,
                       double avg_price);

}  // namespace mark0
