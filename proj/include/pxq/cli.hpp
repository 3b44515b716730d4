// The pxq command line. Exit codes: 0 success, 1 usage, 2 IO or parse
// failure, 3 resource cap exceeded.

#ifndef PXQ_CLI_HPP
#define PXQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pxq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCap = 3;

/// Splits a comma-separated keyword argument into index tokens, dropping
/// duplicates while keeping first-seen order. "Data Base,xml" yields
/// {"data", "base", "xml"}.
std::vector<std::string> parse_keywords(std::string_view arg);

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pxq

#endif  // PXQ_CLI_HPP
