#pragma once

namespace rig {

inline constexpr const char* kToolName = "rig";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace rig
