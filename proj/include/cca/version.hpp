#pragma once

namespace cca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cca
