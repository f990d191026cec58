#pragma once

#include <ostream>

namespace eqc::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kGateFailed = 3;
inline constexpr int kIoError = 4;

// Parses argv, runs one command and writes its artifact. Results go to --out
// (stdout when "-"); diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eqc::cli
