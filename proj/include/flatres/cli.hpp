#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flatres::cli {

/// Exit codes: 0 all assertions hold, 1 a verified claim failed, 2 usage or
/// precondition error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitUsage = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flatres::cli
