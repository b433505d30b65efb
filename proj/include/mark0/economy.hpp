#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mark0/banking.hpp"
#include "mark0/firm.hpp"
#include "mark0/observables.hpp"
#include "mark0/params.hpp"
#include "mark0/rng.hpp"

namespace mark0 {

/// Relative tolerance on S + E+ - E- - M, checked after every step against the
/// largest gross balance S + E+ + E- reached so far (at least M). Rounding
/// error made while balances were large persists after they shrink.
inline constexpr double kMoneyTolerance = 1e-6;

/// Raised when an accounting invariant breaks; carries the step index.
class ConsistencyError : public std::runtime_error {
 public:
  ConsistencyError(std::int64_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

struct HouseholdSector {
  double savings = 0.0;             // S
  double total_wages = 0.0;         // W_T
  double consumption_budget = 0.0;  // C_B
  double propensity = 0.0;          // c

  friend bool operator==(const HouseholdSector&, const HouseholdSector&) = default;
};

struct BankState {
  double base_rate = 0.0;      // rho0
  double loan_rate = 0.0;      // rho^l
  double deposit_rate = 0.0;   // rho^d
  double default_costs = 0.0;  // D
  double total_loans = 0.0;    // E-
  double firm_deposits = 0.0;  // E+
  double total_deposits = 0.0; // X = S + E+

  friend bool operator==(const BankState&, const BankState&) = default;
};

struct EconomyState {
  std::vector<FirmState> firms;
  HouseholdSector households;
  BankState bank;
  SmoothedMacro smoothed;
  double gamma = 0.0;
  double inflation = 0.0;       // last measured pi
  double prev_avg_price = 1.0;  // pbar used as the base of the next pi
  double last_avg_wage = 1.0;   // wbar fallback when no firm is active
  double money = 0.0;           // M, fixed at initialization
  double peak_balance = 0.0;    // max over steps of S + E+ + E-
  std::int64_t t = 0;
  Rng rng;
  std::vector<double> max_hires;  // scratch, u*_i

  friend bool operator==(const EconomyState&, const EconomyState&) = default;
};

/// Firms start at W = 1, p = 1 + 0.2 (xi - 0.5), Y = [1 + 0.2 (xi - 0.5)] / 2,
/// D = 0.5 and E = W Y xi; households hold S = N_F - sum E so that M = N_F.
EconomyState init_economy(const ModelParams& params, std::uint64_t seed);

/// Same, drawing the initialization xi's from `draw` instead of the state's
/// generator (which is still seeded from `seed`).
EconomyState init_economy(const ModelParams& params, std::uint64_t seed,
                          const std::function<double()>& draw);

struct BankruptcyOutcome {
  double default_costs = 0.0;
  double loans = 0.0;          // E- over survivors
  double firm_deposits = 0.0;  // E+ over survivors
  int count = 0;
};

/// Deactivates every active firm with E <= -theta W Y (never when theta is
/// infinite), adding -E to the default costs, and aggregates the survivors'
/// cash positions.
BankruptcyOutcome resolve_bankruptcies(std::span<FirmState> firms, double theta);

/// Logit split of the N_F u unemployed workers over active firms' wages.
/// Writes u*_i into `out` (zero for inactive firms).
void allocate_workforce(std::span<const FirmState> firms, double beta, double unemployment,
                        double avg_wage, std::span<double> out);

std::vector<double> allocate_workforce(std::span<const FirmState> firms, double beta,
                                       double unemployment, double avg_wage);

struct RevivalContext {
  double unemployment = 0.0;
  double avg_price = 1.0;
  double avg_wage = 1.0;
  double probability = 0.0;
};

/// Each inactive firm revives with the given probability at p = pbar,
/// W = wbar, Y = xi u and E = W Y. The injected cash is taken from firms with
/// positive cash in proportion to their cash. Revivals stop for the step once
/// the injection would exceed the lenders' total cash.
std::vector<std::size_t> revive_firms(EconomyState& state, const RevivalContext& ctx);

/// S + E+ - E- - M.
double money_conservation_check(const EconomyState& state);

/// Advances one period. Order: macro snapshot and u*_i; EMAs; base rate and
/// Gamma; defaults then price/production/wage updates; u and pbar refresh;
/// loan and deposit rates; consumption budget and demand; accounting and
/// dividends; revivals. Throws ConsistencyError on money drift.
StepRecord step(EconomyState& state, const ModelParams& model, const PolicyParams& policy);

}  // namespace mark0
