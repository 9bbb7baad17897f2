#pragma once

namespace powers {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace powers
