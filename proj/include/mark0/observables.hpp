#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mark0/firm.hpp"

namespace mark0 {

// ---------------------------------------------------------------- aggregates

/// Sum of Y over active firms divided by the number of firms, clamped to [0, 1].
double employment_rate(std::span<const FirmState> firms);

/// Production-weighted mean of p over active firms. Falls back to the plain
/// mean when total production is zero; nullopt when no firm is active.
std::optional<double> average_price(std::span<const FirmState> firms);

/// Production-weighted mean wage, with the same fallbacks as average_price.
std::optional<double> average_wage(std::span<const FirmState> firms);

/// Employment, pbar and wbar from a single pass over the firms.
struct Aggregates {
  double employment = 0.0;
  std::optional<double> avg_price;
  std::optional<double> avg_wage;
};

Aggregates aggregates(std::span<const FirmState> firms);

struct PriceLevel {
  double avg_price = 0.0;
  double inflation = 0.0;
};

/// pbar and pi = (pbar - prev) / prev; pi = 0 when there is no previous level.
/// Throws std::invalid_argument when no firm is active.
PriceLevel weighted_price_and_inflation(std::span<const FirmState> firms,
                                        std::optional<double> prev_avg_price);

// ---------------------------------------------------------------- records

/// One row of a run: the economy at the end of step t.
struct StepRecord {
  std::int64_t t = 0;
  double u = 0.0;
  double epsilon = 0.0;
  double pi = 0.0;
  double rho0 = 0.0;
  double rho_l = 0.0;
  double rho_d = 0.0;
  double pbar = 0.0;
  double wbar = 0.0;
  double savings = 0.0;
  double firm_deposits = 0.0;  // E+
  double firm_loans = 0.0;     // E-
  double defaults = 0.0;       // default costs D
  double bankruptcies = 0.0;
  double gamma = 0.0;
  double propensity = 0.0;
  // Diagnostics, not serialized.
  double money_drift = 0.0;
  double bank_profit = 0.0;
  double total_deposits = 0.0;  // X used at rate setting
};

/// Column-oriented time series of a run.
struct RunRecord {
  std::vector<std::int64_t> t;
  std::vector<double> u, epsilon, pi, rho0, rho_l, rho_d, pbar, wbar, savings,
      firm_deposits, firm_loans, defaults, bankruptcies, gamma, propensity;
  std::vector<double> money_drift, bank_profit, total_deposits;

  std::size_t size() const { return t.size(); }
  void reserve(std::size_t n);
  void append(const StepRecord& row);
  StepRecord row(std::size_t i) const;
};

// ---------------------------------------------------------------- summaries

enum class Phase { FE, FU, EC, RU };

std::string_view phase_name(Phase phase);
Phase parse_phase(std::string_view name);

struct RunSummary {
  double mean_u = 0.0;
  double amplitude = 0.0;  // max u - min u over the window
  double mean_pi = 0.0;
  double var_epsilon = 0.0;
  Phase phase = Phase::RU;
};

/// Classifier thresholds, calibrated against representative runs of each phase.
struct PhaseThresholds {
  double full_employment_max_u = 0.1;
  double crisis_min_amplitude = 0.25;
  double full_unemployment_min_u = 0.6;

  friend bool operator==(const PhaseThresholds&, const PhaseThresholds&) = default;
};

/// max - min of series[t_eq:]. Throws std::invalid_argument on an empty window.
double cycle_amplitude(std::span<const double> series, std::size_t t_eq);

/// Statistics over rows t_eq.. of the record, classified with `thresholds`.
RunSummary summarize(const RunRecord& record, std::size_t t_eq,
                     const PhaseThresholds& thresholds = {});

/// EC if the amplitude is large; else FU if mostly unemployed and deflating;
/// else FE if nearly fully employed; else RU.
Phase classify_phase(const RunSummary& summary, const PhaseThresholds& thresholds = {});

/// Majority label; ties resolved in the order EC, FU, FE, RU.
Phase majority_phase(std::span<const Phase> labels);

// ---------------------------------------------------------------- oracles

/// Employment predicted by the adaptive-firm argument at constant wages:
/// Gamma0 / eps = (R_c - R) / (R_c + R) + Gamma0 for R < R_c, and 1 above.
double residual_employment_oracle(double R, double R_c, double gamma0);

}  // namespace mark0
