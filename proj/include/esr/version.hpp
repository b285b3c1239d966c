#pragma once

namespace esr {

inline constexpr char kVersion[] = "0.1.0";

}  // namespace esr
