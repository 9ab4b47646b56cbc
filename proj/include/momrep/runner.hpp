#pragma once

#include <string>
#include <vector>

#include "momrep/config.hpp"

namespace momrep::cli {

/// Round-trip-safe decimal rendering (%.Ng); 17 digits reproduce the double
/// bit pattern exactly.
std::string format_double(double value, int precision);

/// Writes content to path atomically (temp file + rename).
void write_atomic(const std::string& path, const std::string& content);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files_written;
};

/// Command-line overrides on top of the config's output block.
struct RunOverrides {
    std::string out_path;    // empty: keep config / default
    std::string format;      // empty: keep config / default
    double broaden_sigma = 0.0; // > 0: extra peak-visualization file (condensate)
};

/// Executes one validated run request and writes its artifacts. Exit code 0
/// on success, 4 when validate mode finds a failing suite; numerical errors
/// propagate as exceptions for the caller to map to exit code 3.
RunResult run(const config::RunConfig& cfg, const RunOverrides& overrides = {});

} // namespace momrep::cli
