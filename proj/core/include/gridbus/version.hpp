#pragma once

namespace gridbus {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gridbus
