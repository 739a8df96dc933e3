#pragma once

namespace torograph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace torograph
