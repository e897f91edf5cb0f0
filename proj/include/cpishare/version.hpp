#pragma once

namespace cpishare {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpishare
