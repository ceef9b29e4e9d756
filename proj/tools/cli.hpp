#pragma once

// Command dispatch for the whatif tool, callable in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace whatif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// `args` excludes the program name. Results go to `out`; errors go to `err`
/// as one JSON object {"error": "usage"|"data"|"internal", "message", ...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whatif::cli
