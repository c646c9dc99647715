#pragma once

// Command-line front end. Exit codes: 0 = completed without violations,
// 2 = completed with certified violations, 1 = operational error.

#include "bmv/scan.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bmv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct Hooks {
    /// Replaces the trace engine used by `table` and `verify`.
    const TraceProvider* provider = nullptr;
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace bmv::cli
