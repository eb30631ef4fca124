#pragma once

namespace smr {
inline constexpr const char* kVersion = "0.1.0";
}
