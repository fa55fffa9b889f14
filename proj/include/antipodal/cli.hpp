#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace antipodal::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerifiedFalse = 1,
  kInputError = 2,
  kNoResult = 3,
};

// Runs one subcommand. `args` excludes the program name. The report goes to
// `out` as key<TAB>value lines; usage and parse errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a, printed in reports as 16 lowercase hex digits.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace antipodal::cli
