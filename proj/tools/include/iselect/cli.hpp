#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iselect::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

/// Runs the tool on `args` (args[0] is the program name). Help text goes to
/// `out`, diagnostics and the run summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iselect::cli
