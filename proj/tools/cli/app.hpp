#pragma once

#include <iosfwd>

namespace adcal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

// Full command-line entry point with injectable streams. Returns kExitOk on
// success, kExitDomain when the answer is a domain outcome (empty selection,
// search budget exceeded, an invalid instance under `validate`), and
// kExitUsage for bad flags, unreadable input, or malformed arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adcal::cli
