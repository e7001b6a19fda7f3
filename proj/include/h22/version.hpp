#pragma once

namespace h22 {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace h22
