#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace tpadlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParseError = 2;
inline constexpr int kExitAnalysisError = 3;
inline constexpr int kExitUsage = 64;

/// Runs one invocation. `args` excludes the program name. Tables go to `out`
/// (or to --out), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace tpadlab::cli
