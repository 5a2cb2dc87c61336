#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hk::cli {

// Exit codes: 0 success, 1 numerical failure or failed claim, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Output files named by --out and friends are
// written directly; everything else goes to out / err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hk::cli
