#pragma once

namespace structmap {

inline constexpr const char* version = "0.1.0";

}  // namespace structmap
