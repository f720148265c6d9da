#pragma once

namespace cubicw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cubicw
