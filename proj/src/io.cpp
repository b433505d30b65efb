#include "mark0/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace mark0 {

namespace {

void append_g12(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  out += buf;
}

std::string preamble(const Provenance& p) {
  std::string out = "# schema: " + p.schema + "\n";
  if (!p.seeds.empty()) {
    out += "# seeds:";
    for (auto s : p.seeds) out += " " + std::to_string(s);
    out += "\n";
  }
  if (p.config) {
    std::istringstream lines(serialize_config(*p.config));
    for (std::string line; std::getline(lines, line);) out += "# config: " + line + "\n";
  }
  return out;
}

std::vector<double> split_row(std::string_view line, std::size_t expected, std::size_t line_no) {
  std::vector<double> out;
  out.reserve(expected);
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto comma = std::min(line.find(',', pos), line.size());
    const std::string field(line.substr(pos, comma - pos));
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
      throw std::runtime_error("timeseries line " + std::to_string(line_no) + ": bad field '" +
                               field + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw std::runtime_error("timeseries line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected) + " fields, got " +
                             std::to_string(out.size()));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json number_or_text(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json stat_json(const Stat& s) {
  return {{"mean", number_or_text(s.mean)}, {"std", number_or_text(s.stddev)}};
}

}  // namespace

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string format_timeseries(const RunRecord& r) {
  std::string out(kTimeseriesHeader);
  out += '\n';
  out.reserve(r.size() * 200);
  for (std::size_t i = 0; i < r.size(); ++i) {
    out += std::to_string(r.t[i]);
    for (double v : {r.u[i], r.epsilon[i], r.pi[i], r.rho0[i], r.rho_l[i], r.rho_d[i], r.pbar[i],
                     r.wbar[i], r.savings[i], r.firm_deposits[i], r.firm_loans[i], r.defaults[i],
                     r.bankruptcies[i], r.gamma[i], r.propensity[i]}) {
      out += ',';
      append_g12(out, v);
    }
    out += '\n';
  }
  return out;
}

RunRecord parse_timeseries(std::string_view text) {
  RunRecord r;
  bool header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kTimeseriesHeader) {
        throw std::runtime_error("timeseries line " + std::to_string(line_no) + ": unexpected header");
      }
      header = true;
      continue;
    }
    const auto v = split_row(line, 16, line_no);
    StepRecord row;
    row.t = static_cast<std::int64_t>(v[0]);
    row.u = v[1];
    row.epsilon = v[2];
    row.pi = v[3];
    row.rho0 = v[4];
    row.rho_l = v[5];
    row.rho_d = v[6];
    row.pbar = v[7];
    row.wbar = v[8];
    row.savings = v[9];
    row.firm_deposits = v[10];
    row.firm_loans = v[11];
    row.defaults = v[12];
    row.bankruptcies = v[13];
    row.gamma = v[14];
    row.propensity = v[15];
    r.append(row);
  }
  if (!header) throw std::runtime_error("timeseries: missing header");
  return r;
}

RunRecord read_timeseries(const std::string& path) { return parse_timeseries(read_file(path)); }

void write_timeseries(const RunRecord& record, const std::string& path,
                      const Provenance* provenance) {
  std::string content = provenance ? preamble(*provenance) : std::string();
  content += format_timeseries(record);
  write_file_atomic(path, content);
}

std::string format_grid(const PhaseGrid& grid, const Config& config) {
  if (!grid.complete()) throw std::invalid_argument("write_grid: grid is incomplete");
  using nlohmann::json;
  const auto& spec = grid.spec;
  json doc;
  doc["schema"] = kGridSchema;
  // Values kept as their config-file text so that inf survives JSON.
  json cfg = json::object();
  {
    std::istringstream lines(serialize_config(config));
    for (std::string line; std::getline(lines, line);) {
      const auto eq = line.find(" = ");
      cfg[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  doc["config"] = cfg;
  doc["run"] = {{"T", spec.length.T}, {"t_eq", spec.length.t_eq},
                {"ensemble_size", spec.ensemble_size}, {"base_seed", spec.base_seed},
                {"seed_rule", "derive_seed(base_seed, {ix, iy, replicate})"}};
  doc["thresholds"] = {{"fe_max_u", spec.thresholds.full_employment_max_u},
                       {"ec_min_amplitude", spec.thresholds.crisis_min_amplitude},
                       {"fu_min_u", spec.thresholds.full_unemployment_min_u}};
  auto axis = [](const Axis& a) {
    json values = json::array();
    for (std::size_t i = 0; i < a.steps; ++i) values.push_back(a.value(i));
    return json{{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps},
                {"values", values}};
  };
  doc["axes"] = {{"x", axis(spec.x)}, {"y", axis(spec.y)}};
  json cells = json::array();
  for (const auto& c : grid.cells) {
    json runs = json::array();
    for (const auto& r : c.result.runs) {
      json run = {{"seed", r.seed}, {"ok", r.ok}};
      if (r.ok) {
        run["mean_u"] = number_or_text(r.summary.mean_u);
        run["amplitude"] = number_or_text(r.summary.amplitude);
        run["mean_pi"] = number_or_text(r.summary.mean_pi);
        run["var_epsilon"] = number_or_text(r.summary.var_epsilon);
        run["phase"] = phase_name(r.summary.phase);
      } else {
        run["error"] = r.error;
        run["failed_step"] = r.failed_step;
      }
      runs.push_back(run);
    }
    cells.push_back({{"ix", c.ix}, {"iy", c.iy}, {"x", c.x}, {"y", c.y},
                     {"completed", c.result.completed}, {"failed", c.result.failed()},
                     {"mean_u", stat_json(c.result.mean_u)},
                     {"amplitude", stat_json(c.result.amplitude)},
                     {"mean_pi", stat_json(c.result.mean_pi)},
                     {"var_epsilon", stat_json(c.result.var_epsilon)},
                     {"phase", c.result.completed ? json(phase_name(c.result.majority)) : json()},
                     {"seeds", c.seeds}, {"runs", runs}});
  }
  doc["cells"] = cells;
  return doc.dump(1) + "\n";
}

void write_grid(const PhaseGrid& grid, const Config& config, const std::string& path) {
  write_file_atomic(path, format_grid(grid, config));
}

std::string format_impulse(const ImpulseResponse& r) {
  std::string out = "lag,output,wages,prices,output_net,wages_net,prices_net\n";
  for (std::size_t i = 0; i < r.lag.size(); ++i) {
    out += std::to_string(r.lag[i]);
    for (double v : {r.output[i], r.wages[i], r.prices[i], r.output_net[i], r.wages_net[i],
                     r.prices_net[i]}) {
      out += ',';
      append_g12(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_impulse(const ImpulseResponse& response, const std::string& path,
                   const Provenance* provenance) {
  std::string content = provenance ? preamble(*provenance) : std::string();
  content += format_impulse(response);
  write_file_atomic(path, content);
}

}  // namespace mark0
