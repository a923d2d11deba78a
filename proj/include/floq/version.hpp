#pragma once

namespace floq {
inline constexpr const char* version = "1.0.0";
}
