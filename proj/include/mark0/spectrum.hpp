#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mark0 {

/// One-sided power spectrum at omega_k = 2 pi k / n, k = 1 .. n/2.
struct Spectrum {
  std::vector<double> omega;
  std::vector<double> power;
  std::size_t length = 0;  // n, number of samples transformed
};

inline constexpr std::size_t kMinSpectrumLength = 1024;

/// Periodogram |X_k|^2 / n of series[t_eq:] minus its mean, truncated to the
/// largest power of two. Throws std::invalid_argument if fewer than
/// kMinSpectrumLength samples remain.
Spectrum power_spectrum(std::span<const double> series, std::size_t t_eq = 0);

/// Centered moving average of log I over `window` bins (shrinking at the
/// edges); the result holds exp of the averaged log.
Spectrum smooth_log_spectrum(const Spectrum& spectrum, std::size_t window = 100);

enum class FitStatus {
  Ok,
  PinnedLow,     // omega0 at the lower band edge: no visible corner
  PinnedHigh,    // omega0 at the upper band edge: flat spectrum, not OU-like
  TooFewPoints,
  InvalidInput,  // non-positive or non-finite power in the band
};

std::string_view fit_status_name(FitStatus status);

struct OuFitOptions {
  std::size_t skip_low_bins = 3;
  double max_omega = 0.5;        // upper end of the fitted band
  std::size_t bins_per_decade = 20;  // log binning of the band; 0 fits every bin
  std::size_t search_points = 400;
  // The input is a (log-averaged) periodogram, whose log is biased low by
  // Euler's gamma; set false for noiseless spectra.
  bool periodogram_bias = true;
};

struct OuFit {
  double i0 = 0.0;
  double omega0 = 0.0;
  double residual = 0.0;  // occupancy-weighted RMS deviation in natural-log power
  std::size_t points = 0;
  double band_low = 0.0;
  double band_high = 0.0;
  FitStatus status = FitStatus::InvalidInput;

  bool ok() const { return status == FitStatus::Ok; }
  std::string diagnostics() const;
};

/// Least-squares fit of log I(omega) to log[I0 omega0^2 / (omega0^2 + omega^2)]
/// over the band. I0 is solved in closed form for each trial omega0 and
/// corrected for the e^-gamma bias of the log-periodogram. Never throws on a
/// bad fit; the outcome is in `status`.
OuFit fit_ou(const Spectrum& spectrum, const OuFitOptions& options = {});

/// I0 omega0^2 / (omega0^2 + omega^2).
inline double ou_spectrum(double omega, double i0, double omega0) {
  return i0 * omega0 * omega0 / (omega0 * omega0 + omega * omega);
}

}  // namespace mark0
