#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace convexchains::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitUsage = 64;

// Runs the tool on args (without the program name). Results go to `out`
// unless --out is given; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace convexchains::cli
