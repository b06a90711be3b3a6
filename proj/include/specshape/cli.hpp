#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "specshape/config.hpp"

namespace specshape::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

// Each command writes resolved_config.json plus its own outputs into
// config.output_dir and throws specshape::Error on failure.
void cmd_eigs(const RunConfig& config);      // spectrum.csv
void cmd_deriv(const RunConfig& config);     // fd_table.csv
void cmd_critical(const RunConfig& config);  // critical_report.json
void cmd_heat(const RunConfig& config);      // heat_trace.csv
void cmd_flow(const RunConfig& config);      // trajectory.csv, final_shape.json

/// Critical report as written by cmd_critical.
nlohmann::json critical_report(const RunConfig& config);

/// Full command line front end; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specshape::cli
