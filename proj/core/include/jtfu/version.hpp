#pragma once

#include <string_view>

namespace jtfu {

inline constexpr std::string_view version_string = "1.0.0";
inline constexpr int version_major = 1;
inline constexpr int version_minor = 0;
inline constexpr int version_patch = 0;

} // namespace jtfu
