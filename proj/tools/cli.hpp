#pragma once

#include <iosfwd>
#include <string>

#include "ross/report.hpp"

namespace ross::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one command. Never throws; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Recomputes a report from a full command config ("check-lemmas" or
/// "verify"), as embedded in every report.
Report run_config(const Json& config);

/// Reruns the config embedded in a report file and compares margins.
int replay(const std::string& path, std::ostream& out, std::ostream& err, double tol = 1e-12);

}  // namespace ross::cli
