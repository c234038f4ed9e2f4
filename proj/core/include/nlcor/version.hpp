#pragma once

namespace nlcor {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlcor
