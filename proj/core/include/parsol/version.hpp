#pragma once

namespace parsol {

inline constexpr const char* kVersion = "1.0.0";

} // namespace parsol
