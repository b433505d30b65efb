#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace mark0 {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Behavioral and structural knobs of the firms + households economy.
///
/// Defaults are the baseline used throughout the phase-diagram experiments
/// (R = 2 with eta_- = 0.1, c0 = 0.5, Gamma0 = 0, phi = 0.1, gamma_p = gamma_w =
/// 0.05, beta = 2, delta = 0.02, f = 0.5, N_F = 2000) with the rate channels
/// switched on at alpha_c = 4 and alpha_Gamma = 50.
struct ModelParams {
  int n_firms = 2000;
  double c0 = 0.5;          // baseline consumption propensity
  double beta = 2.0;        // intensity of choice (prices and wages)
  double gamma_p = 0.05;    // price adjustment scale
  double gamma_w = 0.05;    // wage adjustment scale
  double R = 2.0;           // hiring/firing speed ratio eta_+ / eta_-
  double eta_minus = 0.1;   // firing propensity
  double delta = 0.02;      // dividend share
  double theta = 3.0;       // bankruptcy threshold on -E/(W Y); +inf disables defaults
  double revival = 0.1;     // per-step revival probability of an inactive firm
  double f = 0.5;           // share of default costs charged to loans
  double alpha_c = 4.0;     // household sensitivity to pi~ - rho~d
  double alpha_gamma = 50.0;  // firm sensitivity to the real loan rate
  double gamma0 = 0.0;      // floor of the fragility sensitivity Gamma
  std::uint64_t seed = 1;

  double eta_plus() const { return R * eta_minus; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Central Bank knobs. All rates are per time step.
struct PolicyParams {
  double rho_star = 0.02;   // natural base rate
  double phi_pi = 0.0;      // inflation aggressiveness
  double phi_eps = 0.0;     // employment aggressiveness
  double pi_star = 0.002;   // inflation target
  double eps_star = 0.95;   // employment target
  double omega = 0.2;       // EMA weight shared by every smoothed variable

  void validate() const;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

/// Names accepted by set_parameter / get_parameter, in canonical order.
const std::vector<std::string>& parameter_names();

bool is_parameter(std::string_view name);

/// Assigns a numeric parameter by name. Integer fields (n_firms, seed) are
/// rounded. Throws std::invalid_argument on an unknown name.
void set_parameter(std::string_view name, double value, ModelParams& model,
                   PolicyParams& policy);

double get_parameter(std::string_view name, const ModelParams& model,
                     const PolicyParams& policy);

}  // namespace mark0
