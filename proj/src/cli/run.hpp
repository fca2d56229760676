#pragma once

#include "cli/config.hpp"

namespace gbs::cli {

// Exit codes: every engine error family maps to its own code so callers can
// dispatch without parsing messages.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitMesh = 3;
inline constexpr int kExitDivergence = 4;
inline constexpr int kExitPicard = 5;
inline constexpr int kExitNumeric = 6;
inline constexpr int kExitIo = 7;

// Validates and executes the configured command, writing the artifact to
// cfg.path ("-" for stdout). On failure prints a one-object JSON error record
// to stderr and returns the matching exit code.
int run(const RunConfig& cfg);

// Prints the JSON error record for an in-flight exception and returns its
// exit code (shared by run() and the front end's config-loading phase).
int report_error(std::exception_ptr error);

}  // namespace gbs::cli
