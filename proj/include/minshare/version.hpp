#pragma once

namespace minshare {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace minshare
