#pragma once

namespace popmarket {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace popmarket
