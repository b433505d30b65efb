#include "mark0/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace mark0 {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Band {
  std::vector<double> log_omega;
  std::vector<double> log_power;
  std::vector<double> weight;  // raw bins behind each point
  double low = 0.0;
  double high = 0.0;
};

// Selected bins, optionally averaged (in log space) into logarithmic bins.
Band fit_band(const Spectrum& s, const OuFitOptions& opt, bool& invalid) {
  Band band;
  invalid = false;
  std::vector<double> lw, lp;
  for (std::size_t k = opt.skip_low_bins; k < s.omega.size(); ++k) {
    if (s.omega[k] > opt.max_omega) break;
    const double p = s.power[k];
    if (!(p > 0.0) || !std::isfinite(p)) {
      invalid = true;
      return band;
    }
    lw.push_back(std::log(s.omega[k]));
    lp.push_back(std::log(p));
  }
  if (lw.empty()) return band;
  band.low = std::exp(lw.front());
  band.high = std::exp(lw.back());
  if (opt.bins_per_decade == 0) {
    band.weight.assign(lw.size(), 1.0);
    band.log_omega = std::move(lw);
    band.log_power = std::move(lp);
    return band;
  }
  const double width = std::log(10.0) / static_cast<double>(opt.bins_per_decade);
  std::size_t i = 0;
  while (i < lw.size()) {
    const double edge = lw[i] + width;
    double sw = 0.0, sp = 0.0;
    std::size_t n = 0;
    for (; i < lw.size() && (lw[i] < edge || n == 0); ++i, ++n) {
      sw += lw[i];
      sp += lp[i];
    }
    band.log_omega.push_back(sw / static_cast<double>(n));
    band.log_power.push_back(sp / static_cast<double>(n));
    band.weight.push_back(static_cast<double>(n));
  }
  return band;
}

struct Trial {
  double log_i0 = 0.0;
  double sse = 0.0;
};

Trial evaluate(const Band& band, double log_omega0) {
  const double w0sq = std::exp(2.0 * log_omega0);
  const std::size_t n = band.log_omega.size();
  std::vector<double> shape(n);
  // Weighted by bin occupancy: a log-averaged bin of n raw points has 1/n
  // of the single-point variance.
  double mean = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wsq = std::exp(2.0 * band.log_omega[i]);
    shape[i] = std::log(w0sq / (w0sq + wsq));
    mean += band.weight[i] * (band.log_power[i] - shape[i]);
    wsum += band.weight[i];
  }
  Trial t;
  t.log_i0 = mean / wsum;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = band.log_power[i] - shape[i] - t.log_i0;
    t.sse += band.weight[i] * r * r;
  }
  t.sse /= wsum;
  return t;
}

}  // namespace

Spectrum power_spectrum(std::span<const double> series, std::size_t t_eq) {
  if (t_eq >= series.size() || series.size() - t_eq < kMinSpectrumLength) {
    throw std::invalid_argument("power_spectrum: need at least " +
                                std::to_string(kMinSpectrumLength) +
                                " samples after equilibration");
  }
  const std::size_t n = std::bit_floor(series.size() - t_eq);
  const auto window = series.subspan(t_eq, n);
  const double mean = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(n);

  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) in[i] = window[i] - mean;
  fftw_execute(plan);

  Spectrum s;
  s.length = n;
  s.omega.resize(n / 2);
  s.power.resize(n / 2);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    s.omega[k - 1] = 2.0 * std::numbers::pi * static_cast<double>(k) / dn;
    s.power[k - 1] = (out[k][0] * out[k][0] + out[k][1] * out[k][1]) / dn;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  fftw_free(in);
  return s;
}

Spectrum smooth_log_spectrum(const Spectrum& spectrum, std::size_t window) {
  if (window <= 1) return spectrum;
  const std::size_t n = spectrum.power.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Zero bins (e.g. an exact sinusoid) would poison the log average.
    prefix[i + 1] = prefix[i] + std::log(std::max(spectrum.power[i], 1e-300));
  }
  Spectrum out = spectrum;
  const std::size_t half = window / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > half ? i - half : 0;
    const std::size_t hi = std::min(n, lo + window);
    out.power[i] = std::exp((prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo));
  }
  return out;
}

std::string_view fit_status_name(FitStatus status) {
  switch (status) {
    case FitStatus::Ok: return "ok";
    case FitStatus::PinnedLow: return "pinned-low";
    case FitStatus::PinnedHigh: return "pinned-high";
    case FitStatus::TooFewPoints: return "too-few-points";
    case FitStatus::InvalidInput: return "invalid-input";
  }
  return "invalid-input";
}

std::string OuFit::diagnostics() const {
  std::ostringstream os;
  os << "OU fit " << fit_status_name(status) << ": omega0=" << omega0 << " I0=" << i0
     << " rms(log)=" << residual << " points=" << points << " band=[" << band_low << ", "
     << band_high << "]";
  return os.str();
}

OuFit fit_ou(const Spectrum& spectrum, const OuFitOptions& options) {
  OuFit fit;
  bool invalid = false;
  const Band band = fit_band(spectrum, options, invalid);
  fit.points = band.log_omega.size();
  fit.band_low = band.low;
  fit.band_high = band.high;
  if (invalid) {
    fit.status = FitStatus::InvalidInput;
    return fit;
  }
  if (fit.points < 4) {
    fit.status = FitStatus::TooFewPoints;
    return fit;
  }

  // Coarse scan of log omega0 across the band, then golden-section refinement.
  const double lo = std::log(band.low);
  const double hi = std::log(band.high);
  const std::size_t m = std::max<std::size_t>(options.search_points, 8);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  std::size_t best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double sse = evaluate(band, lo + step * static_cast<double>(j)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = j;
    }
  }
  double a = lo + step * static_cast<double>(best > 0 ? best - 1 : 0);
  double b = lo + step * static_cast<double>(std::min(best + 1, m - 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = evaluate(band, x1).sse;
  double f2 = evaluate(band, x2).sse;
  for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = evaluate(band, x1).sse;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = evaluate(band, x2).sse;
    }
  }
  double x = 0.5 * (a + b);
  Trial t = evaluate(band, x);
  const Trial edge = evaluate(band, lo + step * static_cast<double>(best));
  if (edge.sse < t.sse) {
    x = lo + step * static_cast<double>(best);
    t = edge;
  }

  fit.omega0 = std::exp(x);
  fit.i0 = std::exp(t.log_i0 + (options.periodogram_bias ? std::numbers::egamma : 0.0));
  fit.residual = std::sqrt(t.sse);
  if (best == 0 && x - lo < step) fit.status = FitStatus::PinnedLow;
  else if (best == m - 1 && hi - x < step) fit.status = FitStatus::PinnedHigh;
  else fit.status = FitStatus::Ok;
  return fit;
}

}  // namespace mark0
