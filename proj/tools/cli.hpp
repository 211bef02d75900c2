#pragma once

#include <ostream>

namespace sdtool {

inline constexpr const char* kToolName = "sdtool";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 all checks passed, 1 violations, 2 usage or parse error,
// 3 cap exceeded.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdtool
