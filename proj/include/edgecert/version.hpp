#pragma once

namespace edgecert {

inline constexpr const char* kToolName = "edgecert";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace edgecert
