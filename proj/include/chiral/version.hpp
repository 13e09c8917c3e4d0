#pragma once

namespace chiral {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chiral
