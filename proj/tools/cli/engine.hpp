#pragma once

#include "cli/run_config.hpp"

namespace torograph::cli {

/// Executes one configured command: reads the input, runs the requested
/// pipeline, writes report/graph artifacts under config.output, and maps
/// failures to the documented exit codes (human text on stderr, optional
/// machine-readable JSON on stdout with --error-json).
int run(const RunConfig& config);

}  // namespace torograph::cli
