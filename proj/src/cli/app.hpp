#pragma once

#include <iosfwd>

namespace gkq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;  // I/O and anything unexpected
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gkq::cli
