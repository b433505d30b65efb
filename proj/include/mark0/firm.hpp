#pragma once

namespace mark0 {

/// One firm. Production equals workforce (unit productivity).
struct FirmState {
  double production = 0.0;  // Y
  double price = 1.0;       // p
  double wage = 1.0;        // W
  double cash = 0.0;        // E, negative when indebted
  double demand = 0.0;      // D
  double profit = 0.0;      // P, from the previous accounting step
  bool active = true;

  double payroll() const { return wage * production; }

  friend bool operator==(const FirmState&, const FirmState&) = default;
};

/// Debt-to-payroll ratio -E/(W Y). When gamma > 0 the result is clamped to
/// [-1/gamma, 1/gamma] so the reaction-rate factors stay in [0, 2]. A firm with
/// no payroll has fragility 0.
double fragility(const FirmState& firm, double gamma);

struct ReactionRates {
  double hire = 0.0;  // eta_+
  double fire = 0.0;  // eta_-
};

ReactionRates reaction_rates(double fragility, double gamma, double eta_minus, double R);

/// True when the price rule moves the price this step (a uniform draw is
/// needed only in that case).
bool price_responds(const FirmState& firm, double avg_price);

/// Multiplicative price update: underproducing firms priced below the
/// average raise by gamma_p * xi, overproducing firms priced above it cut by
/// gamma_p * xi; every other case keeps the price.
double update_price(const FirmState& firm, double avg_price, double gamma_p, double xi);

/// Y + min(eta_+ (D - Y), max_hires) when demand exceeds production,
/// max(0, Y - eta_- (Y - D)) when it falls short.
double update_production(const FirmState& firm, double max_hires, ReactionRates rates);

struct WageContext {
  double gamma = 0.0;
  double fragility = 0.0;
  double unemployment = 0.0;  // start-of-step u; employment is 1 - u
  double gamma_w = 0.0;
  double deposit_rate = 0.0;  // rates in force before this step's rate setting
  double loan_rate = 0.0;
};

bool wage_responds(const FirmState& firm);

/// Wage rule. Profitable underproducers raise by gamma_w (1 - Gamma Phi) eps xi,
/// capped so that the profit recomputed at current sales stays >= 0 (no cap
/// for a firm with zero production). Loss-making overproducers cut by
/// gamma_w (1 + Gamma Phi) u xi. Otherwise unchanged.
double update_wage(const FirmState& firm, const WageContext& ctx, double xi);

struct AccountingResult {
  double cash = 0.0;
  double profit = 0.0;
  double dividend = 0.0;
};

/// Sales minus payroll plus interest on the cash position; a profitable firm
/// with positive cash pays delta of its post-profit cash as dividends.
AccountingResult firm_accounting(const FirmState& firm, double deposit_rate,
                                 double loan_rate, double delta);

}  // namespace mark0
