#pragma once

namespace mvci {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mvci
