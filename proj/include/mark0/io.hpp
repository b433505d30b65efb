#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mark0/config.hpp"
#include "mark0/experiments.hpp"
#include "mark0/observables.hpp"

namespace mark0 {

inline constexpr std::string_view kTimeseriesSchema = "mark0-timeseries/1";
inline constexpr std::string_view kGridSchema = "mark0-phasegrid/1";
inline constexpr std::string_view kImpulseSchema = "mark0-impulse/1";

inline constexpr std::string_view kTimeseriesHeader =
    "t,u,epsilon,pi,rho0,rho_l,rho_d,pbar,wbar,S,Eplus,Eminus,defaults,bankruptcies,Gamma,c";

/// What produced an output file; written as `#` comment lines before the CSV
/// header (schema, seeds, then the serialized config).
struct Provenance {
  std::string schema;
  std::vector<std::uint64_t> seeds;
  std::optional<Config> config;
};

/// Header plus one row per step, values printed with %.12g.
std::string format_timeseries(const RunRecord& record);

/// Reads what format_timeseries (optionally behind a provenance preamble)
/// wrote. Throws std::runtime_error on a malformed file.
RunRecord parse_timeseries(std::string_view text);
RunRecord read_timeseries(const std::string& path);

/// Atomically writes the CSV (temporary file, then rename). Throws
/// std::runtime_error when the path is not writable.
void write_timeseries(const RunRecord& record, const std::string& path,
                      const Provenance* provenance = nullptr);

/// JSON document with schema, config, axes, per-cell statistics, labels and
/// per-run seeds. Throws std::invalid_argument for an incomplete grid.
std::string format_grid(const PhaseGrid& grid, const Config& config);
void write_grid(const PhaseGrid& grid, const Config& config, const std::string& path);

/// CSV: lag,output,wages,prices,output_net,wages_net,prices_net.
std::string format_impulse(const ImpulseResponse& response);
void write_impulse(const ImpulseResponse& response, const std::string& path,
                   const Provenance* provenance = nullptr);

/// Writes `content` to `path` through a temporary file in the same directory.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace mark0
