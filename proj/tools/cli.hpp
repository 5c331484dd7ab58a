#pragma once

// Command implementations of the nullfield tool.  Everything runs in-process
// so tests can call run() directly.

#include <iosfwd>
#include <string>
#include <vector>

#include "cli_config.hpp"

namespace nullfield::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Runs one configured command.  The JSON report goes to `out` (and to
/// <cfg.out>.json next to the CSV when cfg.out is set); diagnostics go to
/// `err`.  Returns 0 when every check passes, 1 on a failed check or a
/// numerical failure and 2 on configuration errors.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_arguments followed by run.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nullfield::cli
