#pragma once

namespace mmcmax {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace mmcmax
