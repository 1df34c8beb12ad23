#pragma once

#include <ostream>

namespace gibbsrate::cli {

/// Exit codes: 0 success, 2 invalid parameters or unparseable arguments,
/// 3 numerical failure (non-convergence, truncation too small).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one subcommand. argv[1] names the subcommand; a `--config file.json`
/// holding flat key/value pairs supplies defaults that flags override.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gibbsrate::cli
