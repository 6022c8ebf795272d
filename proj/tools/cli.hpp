#pragma once

#include <iosfwd>

namespace dynloc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_config = 2;
inline constexpr int exit_numeric_failure = 3;

/// Entry point of the `dynloc` tool. Output files are written as requested by
/// --out; without --out, CSV goes to `out`. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dynloc::cli
