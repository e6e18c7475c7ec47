#pragma once

#include <iosfwd>

namespace rrgz::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParameterError = 1;
inline constexpr int kRoutingFailure = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rrgz::cli
