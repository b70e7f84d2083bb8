#pragma once

namespace kdof {

inline constexpr const char* version = "0.1.0";

}  // namespace kdof
