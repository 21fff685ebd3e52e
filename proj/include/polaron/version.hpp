#pragma once

namespace polaron {
inline constexpr const char* kVersion = "0.1.0";
}
