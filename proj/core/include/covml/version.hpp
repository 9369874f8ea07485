#pragma once

namespace covml {

inline constexpr const char* kVersion = "0.1.0";

} // namespace covml
