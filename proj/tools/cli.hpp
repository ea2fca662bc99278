#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zk::cli {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kBound = 3 };

/// Parses argv and runs one subcommand. Reports go to out, diagnostics and
/// machine-format footers to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zk::cli
