#pragma once

namespace rnm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rnm
