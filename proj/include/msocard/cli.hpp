#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace msocard {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; `-` as a formula or automaton file reads `in`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace msocard
