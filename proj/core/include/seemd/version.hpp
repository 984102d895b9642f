#pragma once

#include <string_view>

namespace seemd {

// Keep in sync with the project() version in the top-level CMakeLists.txt.
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace seemd
