#pragma once

namespace listqa {

inline constexpr const char* kToolName = "listqa";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace listqa
