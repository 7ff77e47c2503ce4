#pragma once

namespace stbeam {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace stbeam
