#pragma once

// Command-line front end. Subcommands:
//   simulate --config F [--horizon N] [--dt S] [--band B] [--out P]
//   coeffs   --config F --n N [--k K] [--horizon N]
//   roots    --config F
//   verify   [--level quick|full] [--seed S]
// Exit codes: 0 success, 1 input error, 2 verification failure.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace delaystep::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_verify_failed = 2;

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Same as run with argv[0] = "delaystep".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Index order used for the root label p = 1, 2, ...: the null root first,
/// then the remaining roots from largest to smallest.
[[nodiscard]] std::vector<std::size_t> root_numbering(const std::vector<double>& roots);

}  // namespace delaystep::cli
