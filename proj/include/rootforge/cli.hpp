#pragma once

/// @file cli.hpp
/// @brief Command-line front end: construct / verify / decompose / classify
/// / similar / enumerate / catalog / realize, with deterministic text or
/// structured reports and atomic artifact writes.

#include <iosfwd>
#include <string>
#include <vector>

namespace rf::cli {

/// Parses and runs one command line (arguments without the program name).
/// Artifacts go to stdout or --out; reports go to stdout or --report.
/// Returns the process exit code: 0 when every check in the run passed,
/// 1 when a check failed, 2 on input or parse errors, 3 on internal
/// invariant violations.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace rf::cli
