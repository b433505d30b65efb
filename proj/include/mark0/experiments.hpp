#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mark0/economy.hpp"
#include "mark0/observables.hpp"
#include "mark0/params.hpp"

namespace mark0 {

/// Runs T steps from a fresh economy. Deterministic in (model, policy, T, seed).
/// Throws std::invalid_argument for T = 0; ConsistencyError propagates.
RunRecord run_simulation(const ModelParams& model, const PolicyParams& policy, std::size_t T,
                         std::uint64_t seed);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware
/// concurrency). Results must be written to per-index slots. The first
/// exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::int64_t failed_step = -1;  // set for ConsistencyError
  RunSummary summary;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

struct EnsembleResult {
  std::vector<SeedResult> runs;
  Stat mean_u, amplitude, mean_pi, var_epsilon;
  Phase majority = Phase::RU;
  std::size_t completed = 0;

  bool complete() const { return completed == runs.size(); }
  std::size_t failed() const { return runs.size() - completed; }
};

struct RunLength {
  std::size_t T = 20000;
  std::size_t t_eq = 5000;

  friend bool operator==(const RunLength&, const RunLength&) = default;
};

/// Runs one simulation per seed. Failing seeds are flagged and excluded from
/// the statistics; the majority label is taken over completed runs. Throws
/// std::invalid_argument on an empty seed list or t_eq >= T.
EnsembleResult ensemble(const ModelParams& model, const PolicyParams& policy, RunLength length,
                        const std::vector<std::uint64_t>& seeds,
                        const PhaseThresholds& thresholds = {}, unsigned jobs = 1);

/// Aggregates already computed per-seed results.
EnsembleResult aggregate(std::vector<SeedResult> runs);

// ---------------------------------------------------------------- sweeps

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 2;

  double value(std::size_t i) const;

  friend bool operator==(const Axis&, const Axis&) = default;
};

struct SweepSpec {
  Axis x;
  Axis y;
  ModelParams model;    // everything not on an axis
  PolicyParams policy;
  std::size_t ensemble_size = 4;
  RunLength length;
  std::uint64_t base_seed = 1;
  PhaseThresholds thresholds;
};

struct GridCell {
  std::size_t ix = 0;
  std::size_t iy = 0;
  double x = 0.0;
  double y = 0.0;
  std::vector<std::uint64_t> seeds;
  EnsembleResult result;
};

struct PhaseGrid {
  SweepSpec spec;
  std::vector<GridCell> cells;  // row-major in y: index = iy * x.steps + ix

  const GridCell& at(std::size_t ix, std::size_t iy) const {
    return cells.at(iy * spec.x.steps + ix);
  }
  bool complete() const;
};

/// Cell seed: derive_seed(base, {ix, iy, replicate}).
std::vector<std::uint64_t> cell_seeds(const SweepSpec& spec, std::size_t ix, std::size_t iy);

/// Throws std::invalid_argument naming the offending field if an axis is
/// unknown, has fewer than 2 steps, or any cell's parameters are invalid.
void validate_sweep(const SweepSpec& spec);

/// Parameters of one cell.
std::pair<ModelParams, PolicyParams> cell_params(const SweepSpec& spec, std::size_t ix,
                                                 std::size_t iy);

using SweepProgress = std::function<void(std::size_t cells_done, std::size_t cells_total)>;

/// Evaluates every cell; replicates run concurrently on `jobs` threads. The
/// grid is identical for any `jobs`.
PhaseGrid sweep(const SweepSpec& spec, unsigned jobs = 1, const SweepProgress& progress = {});

/// Recomputes one cell on its own.
GridCell evaluate_cell(const SweepSpec& spec, std::size_t ix, std::size_t iy, unsigned jobs = 1);

// ---------------------------------------------------------------- shocks

struct ShockSpec {
  double rate_before = 0.02;
  double rate_after = 0.018;
  std::size_t shock_time = 10000;  // first step run at rate_after
  std::size_t window_before = 2000;
  std::size_t window_after = 2000;
  std::size_t t_eq = 5000;
  bool relative = true;  // x / <x>_pre - 1, otherwise x - <x>_pre

  friend bool operator==(const ShockSpec&, const ShockSpec&) = default;
};

/// Ensemble-mean responses on lags -window_before .. window_after - 1 around
/// the shock. `*_net` subtract an unshocked control run with the same seed.
struct ImpulseResponse {
  std::vector<std::int64_t> lag;
  std::vector<double> output, wages, prices;
  std::vector<double> output_net, wages_net, prices_net;
  std::vector<std::uint64_t> seeds;
  std::size_t failed = 0;
};

/// Throws std::invalid_argument unless phi_pi = phi_eps = 0, t_eq < shock_time
/// and window_before <= shock_time - t_eq.
ImpulseResponse monetary_shock(const ShockSpec& spec, const ModelParams& model,
                               const PolicyParams& policy, const std::vector<std::uint64_t>& seeds,
                               unsigned jobs = 1);

// ---------------------------------------------------------------- critical R

struct CriticalSearch {
  double r_low = 0.5;   // must collapse
  double r_high = 2.0;  // must stay employed
  double tolerance = 0.01;
  double employment_threshold = 0.5;
  RunLength length;
  std::vector<std::uint64_t> seeds{1, 2};
};

/// Bisection on R at Gamma0 = 0 for the employed/collapsed boundary (mean
/// employment over the window above or below the threshold, averaged over the
/// seeds). Throws std::runtime_error if the bracket does not straddle it.
double locate_critical_r(ModelParams model, const PolicyParams& policy,
                         const CriticalSearch& search, unsigned jobs = 1);

// ---------------------------------------------------------------- residual employment

/// Constant-wage, rate-free setting for the adaptive-firm transition:
/// gamma_w = 0, beta = 0, theta = 5, c0 = 0.5, alpha_c = alpha_Gamma = 0,
/// f = 0 (so rho^l stays at rho0 = 0), with the baseline delta, phi, eta_-.
ModelParams constant_wage_model();
PolicyParams zero_rate_policy();

struct ResidualEmployment {
  double mean_employment = 0.0;  // over completed seeds
  double rescaled = 0.0;         // Gamma0 / mean employment
  std::size_t completed = 0;
};

ResidualEmployment measure_residual_employment(ModelParams model, const PolicyParams& policy,
                                               double R, double gamma0, RunLength length,
                                               const std::vector<std::uint64_t>& seeds,
                                               unsigned jobs = 1);

}  // namespace mark0
