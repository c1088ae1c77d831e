#pragma once

namespace stieltjes {

inline constexpr const char* version = "0.1.0";

}  // namespace stieltjes
