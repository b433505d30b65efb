#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mark0/observables.hpp"

namespace mark0 {

/// Largest violations of the accounting invariants over a record.
struct InvariantReport {
  double max_abs_drift = 0.0;       // |S + E+ - E- - M|
  double max_rel_drift = 0.0;       // |drift| / running max of M, S + E+ + E-
  double max_rel_bank_profit = 0.0; // |rho_l E- - rho_d X - D| / X
  std::int64_t worst_drift_step = 0;
};

InvariantReport check_invariants(const RunRecord& record, double money);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

/// Invariant and oracle suites behind `mark0 validate`: money conservation and
/// the bank no-profit identity across phases, recovery of the rate-free model,
/// the residual-employment collapse, OU-fit sanity and run determinism.
std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace mark0
