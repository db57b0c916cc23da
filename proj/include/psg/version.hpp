#pragma once

namespace psg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace psg
