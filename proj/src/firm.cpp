#include "mark0/firm.hpp"

#include <algorithm>

namespace mark0 {

double fragility(const FirmState& firm, double gamma) {
  const double payroll = firm.payroll();
  if (payroll == 0.0) return 0.0;
  double phi = -firm.cash / payroll;
  if (gamma > 0.0) {
    const double bound = 1.0 / gamma;
    phi = std::clamp(phi, -bound, bound);
  }
  return phi;
}

ReactionRates reaction_rates(double fragility, double gamma, double eta_minus, double R) {
  const double gp = gamma * fragility;
  return {R * eta_minus * std::max(1.0 - gp, 0.0), eta_minus * std::max(1.0 + gp, 0.0)};
}

bool price_responds(const FirmState& firm, double avg_price) {
  if (firm.production < firm.demand) return firm.price < avg_price;
  if (firm.production > firm.demand) return firm.price > avg_price;
  return false;
}

double update_price(const FirmState& firm, double avg_price, double gamma_p, double xi) {
  if (!price_responds(firm, avg_price)) return firm.price;
  const double sign = firm.production < firm.demand ? 1.0 : -1.0;
  return firm.price * (1.0 + sign * gamma_p * xi);
}

double update_production(const FirmState& firm, double max_hires, ReactionRates rates) {
  const double y = firm.production;
  const double d = firm.demand;
  if (y < d) return y + std::min(rates.hire * (d - y), max_hires);
  if (y > d) return std::max(0.0, y - rates.fire * (y - d));
  return y;
}

bool wage_responds(const FirmState& firm) {
  return (firm.production < firm.demand && firm.profit > 0.0) ||
         (firm.production > firm.demand && firm.profit < 0.0);
}

double update_wage(const FirmState& firm, const WageContext& ctx, double xi) {
  if (!wage_responds(firm)) return firm.wage;
  const double gp = ctx.gamma * ctx.fragility;
  if (firm.production < firm.demand) {
    const double employment = 1.0 - ctx.unemployment;
    double wage = firm.wage * (1.0 + ctx.gamma_w * (1.0 - gp) * employment * xi);
    if (firm.production > 0.0) {
      const double sales = firm.price * std::min(firm.demand, firm.production);
      const double interest = ctx.deposit_rate * std::max(firm.cash, 0.0) +
                              ctx.loan_rate * std::min(firm.cash, 0.0);
      wage = std::min(wage, (sales + interest) / firm.production);
    }
    return wage;
  }
  return firm.wage * (1.0 - ctx.gamma_w * (1.0 + gp) * ctx.unemployment * xi);
}

AccountingResult firm_accounting(const FirmState& firm, double deposit_rate,
                                 double loan_rate, double delta) {
  AccountingResult out;
  const double sales = firm.price * std::min(firm.production, firm.demand);
  out.profit = sales - firm.payroll() + deposit_rate * std::max(firm.cash, 0.0) +
               loan_rate * std::min(firm.cash, 0.0);
  out.cash = firm.cash + out.profit;
  if (out.profit > 0.0 && out.cash > 0.0) {
    out.dividend = delta * out.cash;
    out.cash -= out.dividend;
  }
  return out;
}

}  // namespace mark0
