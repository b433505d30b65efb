#include "mark0/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mark0/rng.hpp"

namespace mark0 {

RunRecord run_simulation(const ModelParams& model, const PolicyParams& policy, std::size_t T,
                         std::uint64_t seed) {
  if (T == 0) throw std::invalid_argument("run_simulation: T must be >= 1");
  policy.validate();
  auto state = init_economy(model, seed);
  RunRecord record;
  record.reserve(T);
  for (std::size_t t = 0; t < T; ++t) record.append(step(state, model, policy));
  return record;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

void check_length(RunLength length) {
  if (length.T == 0) throw std::invalid_argument("run length T must be >= 1");
  if (length.t_eq >= length.T) throw std::invalid_argument("t_eq must be < T");
}

SeedResult run_seed(const ModelParams& model, const PolicyParams& policy, RunLength length,
                    std::uint64_t seed, const PhaseThresholds& thresholds) {
  SeedResult r;
  r.seed = seed;
  try {
    const auto record = run_simulation(model, policy, length.T, seed);
    r.summary = summarize(record, length.t_eq, thresholds);
    r.ok = true;
  } catch (const ConsistencyError& e) {
    r.error = e.what();
    r.failed_step = e.step();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double v = 0.0;
  for (double x : xs) v += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(v / n);
  return s;
}

}  // namespace

EnsembleResult aggregate(std::vector<SeedResult> runs) {
  EnsembleResult e;
  e.runs = std::move(runs);
  std::vector<double> u, amp, pi, var;
  std::vector<Phase> labels;
  for (const auto& r : e.runs) {
    if (!r.ok) continue;
    ++e.completed;
    u.push_back(r.summary.mean_u);
    amp.push_back(r.summary.amplitude);
    pi.push_back(r.summary.mean_pi);
    var.push_back(r.summary.var_epsilon);
    labels.push_back(r.summary.phase);
  }
  e.mean_u = stat_of(u);
  e.amplitude = stat_of(amp);
  e.mean_pi = stat_of(pi);
  e.var_epsilon = stat_of(var);
  if (!labels.empty()) e.majority = majority_phase(labels);
  return e;
}

EnsembleResult ensemble(const ModelParams& model, const PolicyParams& policy, RunLength length,
                        const std::vector<std::uint64_t>& seeds,
                        const PhaseThresholds& thresholds, unsigned jobs) {
  if (seeds.empty()) throw std::invalid_argument("ensemble: at least one seed required");
  check_length(length);
  model.validate();
  policy.validate();
  std::vector<SeedResult> runs(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    runs[i] = run_seed(model, policy, length, seeds[i], thresholds);
  });
  return aggregate(std::move(runs));
}

// ---------------------------------------------------------------- sweeps

double Axis::value(std::size_t i) const {
  if (steps < 2) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

bool PhaseGrid::complete() const {
  if (cells.size() != spec.x.steps * spec.y.steps) return false;
  return std::all_of(cells.begin(), cells.end(), [&](const GridCell& c) {
    return c.result.runs.size() == spec.ensemble_size;
  });
}

std::vector<std::uint64_t> cell_seeds(const SweepSpec& spec, std::size_t ix, std::size_t iy) {
  std::vector<std::uint64_t> seeds(spec.ensemble_size);
  for (std::size_t r = 0; r < seeds.size(); ++r) seeds[r] = derive_seed(spec.base_seed, {ix, iy, r});
  return seeds;
}

std::pair<ModelParams, PolicyParams> cell_params(const SweepSpec& spec, std::size_t ix,
                                                 std::size_t iy) {
  ModelParams m = spec.model;
  PolicyParams p = spec.policy;
  set_parameter(spec.x.name, spec.x.value(ix), m, p);
  set_parameter(spec.y.name, spec.y.value(iy), m, p);
  return {m, p};
}

void validate_sweep(const SweepSpec& spec) {
  for (const Axis* a : {&spec.x, &spec.y}) {
    if (!is_parameter(a->name) || a->name == "seed") {
      throw std::invalid_argument("sweep: unknown axis parameter '" + a->name + "'");
    }
    if (a->steps < 2) throw std::invalid_argument("sweep: axis '" + a->name + "' needs >= 2 steps");
    if (!std::isfinite(a->min) || !std::isfinite(a->max)) {
      throw std::invalid_argument("sweep: axis '" + a->name + "' bounds must be finite");
    }
  }
  if (spec.x.name == spec.y.name) throw std::invalid_argument("sweep: both axes are '" + spec.x.name + "'");
  if (spec.ensemble_size == 0) throw std::invalid_argument("sweep: ensemble_size must be >= 1");
  check_length(spec.length);
  for (std::size_t iy = 0; iy < spec.y.steps; ++iy) {
    for (std::size_t ix = 0; ix < spec.x.steps; ++ix) {
      const auto [m, p] = cell_params(spec, ix, iy);
      try {
        m.validate();
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("sweep cell (" + spec.x.name + "=" + std::to_string(spec.x.value(ix)) +
                                    ", " + spec.y.name + "=" + std::to_string(spec.y.value(iy)) +
                                    "): " + e.what());
      }
    }
  }
}

PhaseGrid sweep(const SweepSpec& spec, unsigned jobs, const SweepProgress& progress) {
  validate_sweep(spec);
  PhaseGrid grid;
  grid.spec = spec;
  const std::size_t nx = spec.x.steps;
  const std::size_t ncells = nx * spec.y.steps;
  const std::size_t reps = spec.ensemble_size;
  grid.cells.resize(ncells);
  std::vector<std::vector<SeedResult>> results(ncells, std::vector<SeedResult>(reps));
  for (std::size_t c = 0; c < ncells; ++c) {
    auto& cell = grid.cells[c];
    cell.ix = c % nx;
    cell.iy = c / nx;
    cell.x = spec.x.value(cell.ix);
    cell.y = spec.y.value(cell.iy);
    cell.seeds = cell_seeds(spec, cell.ix, cell.iy);
  }

  std::vector<std::atomic<std::size_t>> remaining(ncells);
  for (auto& r : remaining) r = reps;
  std::atomic<std::size_t> cells_done{0};
  std::mutex progress_mutex;
  parallel_for(ncells * reps, jobs, [&](std::size_t task) {
    const std::size_t c = task / reps;
    const std::size_t r = task % reps;
    const auto& cell = grid.cells[c];
    const auto [m, p] = cell_params(spec, cell.ix, cell.iy);
    results[c][r] = run_seed(m, p, spec.length, cell.seeds[r], spec.thresholds);
    if (remaining[c].fetch_sub(1) == 1) {
      const std::size_t done = cells_done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(done, ncells);
      }
    }
  });
  for (std::size_t c = 0; c < ncells; ++c) grid.cells[c].result = aggregate(std::move(results[c]));
  return grid;
}

GridCell evaluate_cell(const SweepSpec& spec, std::size_t ix, std::size_t iy, unsigned jobs) {
  validate_sweep(spec);
  if (ix >= spec.x.steps || iy >= spec.y.steps) throw std::out_of_range("evaluate_cell: index");
  GridCell cell;
  cell.ix = ix;
  cell.iy = iy;
  cell.x = spec.x.value(ix);
  cell.y = spec.y.value(iy);
  cell.seeds = cell_seeds(spec, ix, iy);
  const auto [m, p] = cell_params(spec, ix, iy);
  std::vector<SeedResult> runs(cell.seeds.size());
  parallel_for(runs.size(), jobs, [&](std::size_t r) {
    runs[r] = run_seed(m, p, spec.length, cell.seeds[r], spec.thresholds);
  });
  cell.result = aggregate(std::move(runs));
  return cell;
}

// ---------------------------------------------------------------- shocks

namespace {

struct ShockPath {
  std::vector<double> output, wages, prices;
};

ShockPath simulate_shock_path(const ShockSpec& spec, const ModelParams& model, PolicyParams policy,
                              std::uint64_t seed, bool shocked) {
  const std::size_t T = spec.shock_time + spec.window_after;
  auto state = init_economy(model, seed);
  ShockPath path;
  const std::size_t first = spec.shock_time - spec.window_before;
  path.output.reserve(T - first);
  path.wages.reserve(T - first);
  path.prices.reserve(T - first);
  policy.rho_star = spec.rate_before;
  for (std::size_t t = 0; t < T; ++t) {
    if (shocked && t == spec.shock_time) policy.rho_star = spec.rate_after;
    const auto row = step(state, model, policy);
    if (t < first) continue;
    path.output.push_back(row.epsilon);
    path.wages.push_back(row.wbar);
    path.prices.push_back(row.pbar);
  }
  return path;
}

void normalize(std::vector<double>& xs, std::size_t pre, bool relative) {
  double base = 0.0;
  for (std::size_t i = 0; i < pre; ++i) base += xs[i];
  base /= static_cast<double>(pre);
  for (double& x : xs) x = relative ? x / base - 1.0 : x - base;
}

}  // namespace

ImpulseResponse monetary_shock(const ShockSpec& spec, const ModelParams& model,
                               const PolicyParams& policy, const std::vector<std::uint64_t>& seeds,
                               unsigned jobs) {
  if (policy.phi_pi != 0.0 || policy.phi_eps != 0.0) {
    throw std::invalid_argument("monetary_shock: requires phi_pi = phi_eps = 0");
  }
  if (spec.shock_time <= spec.t_eq) {
    throw std::invalid_argument("monetary_shock: shock_time must be > t_eq");
  }
  if (spec.window_before == 0 || spec.window_before > spec.shock_time - spec.t_eq) {
    throw std::invalid_argument("monetary_shock: window_before must be in [1, shock_time - t_eq]");
  }
  if (spec.window_after == 0) throw std::invalid_argument("monetary_shock: window_after must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("monetary_shock: at least one seed required");
  model.validate();
  policy.validate();

  struct Pair {
    ShockPath shocked, control;
    bool ok = false;
  };
  std::vector<Pair> paths(seeds.size());
  parallel_for(seeds.size() * 2, jobs, [&](std::size_t task) {
    const std::size_t i = task / 2;
    const bool shocked = task % 2 == 0;
    try {
      auto path = simulate_shock_path(spec, model, policy, seeds[i], shocked);
      (shocked ? paths[i].shocked : paths[i].control) = std::move(path);
    } catch (const ConsistencyError&) {
      // Flagged below by the empty path.
    }
  });

  const std::size_t len = spec.window_before + spec.window_after;
  ImpulseResponse out;
  out.seeds = seeds;
  out.lag.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    out.lag[i] = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(spec.window_before);
  }
  for (auto* v : {&out.output, &out.wages, &out.prices, &out.output_net, &out.wages_net,
                  &out.prices_net}) {
    v->assign(len, 0.0);
  }
  std::size_t used = 0;
  for (auto& p : paths) {
    if (p.shocked.output.size() != len || p.control.output.size() != len) {
      ++out.failed;
      continue;
    }
    ++used;
    for (auto* path : {&p.shocked, &p.control}) {
      normalize(path->output, spec.window_before, spec.relative);
      normalize(path->wages, spec.window_before, spec.relative);
      normalize(path->prices, spec.window_before, spec.relative);
    }
    for (std::size_t i = 0; i < len; ++i) {
      out.output[i] += p.shocked.output[i];
      out.wages[i] += p.shocked.wages[i];
      out.prices[i] += p.shocked.prices[i];
      out.output_net[i] += p.shocked.output[i] - p.control.output[i];
      out.wages_net[i] += p.shocked.wages[i] - p.control.wages[i];
      out.prices_net[i] += p.shocked.prices[i] - p.control.prices[i];
    }
  }
  if (used == 0) throw std::runtime_error("monetary_shock: every seed failed");
  for (auto* v : {&out.output, &out.wages, &out.prices, &out.output_net, &out.wages_net,
                  &out.prices_net}) {
    for (double& x : *v) x /= static_cast<double>(used);
  }
  return out;
}

// ---------------------------------------------------------------- critical R

double locate_critical_r(ModelParams model, const PolicyParams& policy,
                         const CriticalSearch& search, unsigned jobs) {
  check_length(search.length);
  if (!(search.r_low < search.r_high)) throw std::invalid_argument("locate_critical_r: r_low >= r_high");
  model.gamma0 = 0.0;
  auto employed = [&](double R) {
    model.R = R;
    const auto e = ensemble(model, policy, search.length, search.seeds, {}, jobs);
    if (e.completed == 0) throw std::runtime_error("locate_critical_r: every run failed at R=" + std::to_string(R));
    return 1.0 - e.mean_u.mean > search.employment_threshold;
  };
  double lo = search.r_low;
  double hi = search.r_high;
  if (employed(lo) || !employed(hi)) {
    throw std::runtime_error("locate_critical_r: bracket does not contain the transition");
  }
  while (hi - lo > search.tolerance) {
    const double mid = 0.5 * (lo + hi);
    (employed(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- residual employment

ModelParams constant_wage_model() {
  ModelParams m;
  m.gamma_w = 0.0;
  m.beta = 0.0;
  m.theta = 5.0;
  m.c0 = 0.5;
  m.alpha_c = 0.0;
  m.alpha_gamma = 0.0;
  m.f = 0.0;
  return m;
}

PolicyParams zero_rate_policy() {
  PolicyParams p;
  p.rho_star = 0.0;
  p.phi_pi = 0.0;
  p.phi_eps = 0.0;
  return p;
}

ResidualEmployment measure_residual_employment(ModelParams model, const PolicyParams& policy,
                                               double R, double gamma0, RunLength length,
                                               const std::vector<std::uint64_t>& seeds,
                                               unsigned jobs) {
  model.R = R;
  model.gamma0 = gamma0;
  const auto e = ensemble(model, policy, length, seeds, {}, jobs);
  ResidualEmployment out;
  out.completed = e.completed;
  if (e.completed == 0) throw std::runtime_error("measure_residual_employment: every run failed");
  out.mean_employment = 1.0 - e.mean_u.mean;
  out.rescaled = gamma0 / out.mean_employment;
  return out;
}

}  // namespace mark0
