#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace nlt::cli {

constexpr int kExitOk = 0;
constexpr int kExitToolFailure = 1;
constexpr int kExitVerificationFailed = 2;

/// Runs one subcommand. Results go to `out` (or files under --out-dir), usage and
/// error text to `err`. Returns 0, 2 when a verification reports a violation, 1 on
/// usage or I/O errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `key = value` lines; `#` starts a comment. Throws std::runtime_error on malformed lines.
std::map<std::string, std::string> parse_config(std::istream& in);

/// Artifact version string.
const char* version();

}  // namespace nlt::cli
