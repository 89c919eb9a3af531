#pragma once

namespace qrng {

inline constexpr const char* kToolName = "qrng";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace qrng
