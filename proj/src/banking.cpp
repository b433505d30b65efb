#include "mark0/banking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mark0 {

double effective_employment_target(double smoothed_employment, double eps_star) {
  return std::min(1.025 * smoothed_employment, eps_star);
}

double taylor_rate(double smoothed_inflation, double smoothed_employment,
                   const PolicyParams& policy) {
  const double eps = std::max(smoothed_employment, kMinSmoothedEmployment);
  const double target = effective_employment_target(eps, policy.eps_star);
  const double rate = policy.rho_star + 10.0 * policy.phi_pi * (smoothed_inflation - policy.pi_star) +
                      policy.phi_eps * std::log(eps / target);
  return std::max(rate, 0.0);
}

BankRates bank_rates(double base_rate, double default_costs, double loans,
                     double deposits, double f) {
  if (!(deposits > 0.0)) {
    throw std::domain_error("bank_rates: total deposits must be positive");
  }
  BankRates r;
  if (loans > 0.0) {
    r.loan = base_rate + f * default_costs / loans;
    r.deposit = (base_rate * loans - (1.0 - f) * default_costs) / deposits;
  } else {
    r.loan = base_rate;
    r.deposit = -default_costs / deposits;
  }
  return r;
}

double gamma_sensitivity(double smoothed_loan_rate, double smoothed_inflation,
                         double alpha_gamma, double gamma0) {
  return std::max(alpha_gamma * (smoothed_loan_rate - smoothed_inflation), gamma0);
}

ConsumptionBudget consumption_budget(double savings, double total_wages,
                                     double deposit_rate, double smoothed_inflation,
                                     double smoothed_deposit_rate, double c0,
                                     double alpha_c) {
  ConsumptionBudget out;
  out.propensity =
      std::clamp(c0 * (1.0 + alpha_c * (smoothed_inflation - smoothed_deposit_rate)), 0.0, 1.0);
  out.budget = out.propensity * (savings + total_wages + deposit_rate * savings);
  return out;
}

double allocate_demand(double budget, std::span<FirmState> firms, double beta,
                       double avg_price) {
  // Shift by the lowest active price so large beta cannot overflow exp().
  double min_price = std::numeric_limits<double>::infinity();
  for (const auto& f : firms) {
    if (f.active) min_price = std::min(min_price, f.price);
  }
  if (!std::isfinite(min_price)) {
    for (auto& f : firms) f.demand = 0.0;
    return 0.0;
  }
  const double scale = beta / avg_price;
  double norm = 0.0;
  for (auto& f : firms) {
    if (f.active) {
      f.demand = std::exp(-scale * (f.price - min_price));
      norm += f.demand;
    } else {
      f.demand = 0.0;
    }
  }
  for (auto& f : firms) {
    if (f.active) f.demand = budget * f.demand / (norm * f.price);
  }
  return budget;
}

}  // namespace mark0
