#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semsearch::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInvariant = 3;

/// Runs one command line (args[0] is the program name). Results go to
/// `out`, diagnostics to `err` with an `error[<code>]:` prefix; `in` feeds
/// the REPL.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace semsearch::cli
