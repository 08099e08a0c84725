#pragma once

namespace phs {

inline constexpr const char* kProjectName = "phsensor";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace phs
