#pragma once

#include <iosfwd>
#include <string_view>

namespace clbp::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kBadInput = 3;
inline constexpr int kInternal = 4;

// Entry point shared by the executable and the tests. Subcommands: gen,
// analyze, run, sweep, replay. Default worker count comes from CLBP_THREADS.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clbp::cli
