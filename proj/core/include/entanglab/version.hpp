#pragma once

namespace entanglab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace entanglab
