#pragma once

namespace archk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace archk
