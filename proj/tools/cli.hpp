#pragma once

#include <ostream>

namespace dfr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

/// Entry point of the `dfr` tool (generate, fit, bench).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dfr::cli
