#pragma once

// Command-line front end. Exit codes: 0 success, 1 the input data violate
// a required property, 2 usage or format error.

#include <iosfwd>
#include <string>
#include <vector>

namespace circspec::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace circspec::cli
