#pragma once

namespace qxi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qxi
