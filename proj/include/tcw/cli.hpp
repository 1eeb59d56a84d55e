#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcw {

inline constexpr int kReportVersion = 1;

enum ExitCode { ExitOk = 0, ExitFailure = 1, ExitUsage = 2, ExitInput = 3, ExitSizeGuard = 4 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tcw
