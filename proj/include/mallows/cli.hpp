#pragma once

#include <iosfwd>

namespace mallows::cli {

inline constexpr const char* kVersion = "1.0.0";

// Parses argv and runs one subcommand. Results go to `out` (or to --out files),
// usage errors and human-readable diagnostics to `err`.
// Returns 0 on success, 1 on solver errors, 2 on argument errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mallows::cli
