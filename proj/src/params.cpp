#include "mark0/params.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace mark0 {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

bool unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

struct Field {
  const char* name;
  std::function<double&(ModelParams&, PolicyParams&)> ref;
};

template <class M>
Field model_field(const char* name, M ModelParams::*member) {
  return {name, [member](ModelParams& m, PolicyParams&) -> double& { return m.*member; }};
}

Field policy_field(const char* name, double PolicyParams::*member) {
  return {name, [member](ModelParams&, PolicyParams& p) -> double& { return p.*member; }};
}

const std::vector<Field>& double_fields() {
  static const std::vector<Field> fields = {
      model_field("c0", &ModelParams::c0),
      model_field("beta", &ModelParams::beta),
      model_field("gamma_p", &ModelParams::gamma_p),
      model_field("gamma_w", &ModelParams::gamma_w),
      model_field("R", &ModelParams::R),
      model_field("eta_minus", &ModelParams::eta_minus),
      model_field("delta", &ModelParams::delta),
      model_field("theta", &ModelParams::theta),
      model_field("revival", &ModelParams::revival),
      model_field("f", &ModelParams::f),
      model_field("alpha_c", &ModelParams::alpha_c),
      model_field("alpha_gamma", &ModelParams::alpha_gamma),
      model_field("gamma0", &ModelParams::gamma0),
      policy_field("rho_star", &PolicyParams::rho_star),
      policy_field("phi_pi", &PolicyParams::phi_pi),
      policy_field("phi_eps", &PolicyParams::phi_eps),
      policy_field("pi_star", &PolicyParams::pi_star),
      policy_field("eps_star", &PolicyParams::eps_star),
      policy_field("omega", &PolicyParams::omega),
  };
  return fields;
}

const Field* find_field(std::string_view name) {
  for (const auto& f : double_fields()) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

}  // namespace

void ModelParams::validate() const {
  require(n_firms > 0, "n_firms must be > 0");
  require(unit_interval(c0), "c0 must be in [0, 1]");
  require(beta >= 0.0 && std::isfinite(beta), "beta must be finite and >= 0");
  require(gamma_p >= 0.0 && gamma_p < 1.0, "gamma_p must be in [0, 1)");
  require(gamma_w >= 0.0 && gamma_w < 1.0, "gamma_w must be in [0, 1)");
  require(R > 0.0 && std::isfinite(R), "R must be > 0");
  require(eta_minus > 0.0 && eta_minus <= 1.0, "eta_minus must be in (0, 1]");
  require(unit_interval(delta), "delta must be in [0, 1]");
  require(theta > 0.0, "theta must be > 0 (use inf for unbounded leverage)");
  require(unit_interval(revival), "revival must be in [0, 1]");
  require(unit_interval(f), "f must be in [0, 1]");
  require(alpha_c >= 0.0, "alpha_c must be >= 0");
  require(alpha_gamma >= 0.0, "alpha_gamma must be >= 0");
  require(gamma0 >= 0.0, "gamma0 must be >= 0");
}

void PolicyParams::validate() const {
  require(std::isfinite(rho_star), "rho_star must be finite");
  require(phi_pi >= 0.0, "phi_pi must be >= 0");
  require(phi_eps >= 0.0, "phi_eps must be >= 0");
  require(std::isfinite(pi_star), "pi_star must be finite");
  require(eps_star > 0.0 && eps_star <= 1.0, "eps_star must be in (0, 1]");
  require(omega > 0.0 && omega <= 1.0, "omega must be in (0, 1]");
}

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out{"n_firms"};
    for (const auto& f : double_fields()) out.emplace_back(f.name);
    out.emplace_back("seed");
    return out;
  }();
  return names;
}

bool is_parameter(std::string_view name) {
  return name == "n_firms" || name == "seed" || find_field(name) != nullptr;
}

void set_parameter(std::string_view name, double value, ModelParams& model,
                   PolicyParams& policy) {
  if (name == "n_firms") {
    if (!std::isfinite(value)) throw std::invalid_argument("n_firms must be finite");
    model.n_firms = static_cast<int>(std::llround(value));
    return;
  }
  if (name == "seed") {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("seed must be a non-negative integer");
    }
    model.seed = static_cast<std::uint64_t>(std::llround(value));
    return;
  }
  const Field* field = find_field(name);
  if (field == nullptr) {
    throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
  }
  field->ref(model, policy) = value;
}

double get_parameter(std::string_view name, const ModelParams& model,
                     const PolicyParams& policy) {
  if (name == "n_firms") return model.n_firms;
  if (name == "seed") return static_cast<double>(model.seed);
  const Field* field = find_field(name);
  if (field == nullptr) {
    throw std::invalid_argument("unknown parameter '" + std::string(name) + "'");
  }
  ModelParams m = model;
  PolicyParams p = policy;
  return field->ref(m, p);
}

}  // namespace mark0
