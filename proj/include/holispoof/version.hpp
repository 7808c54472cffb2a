#pragma once

namespace holispoof {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace holispoof
