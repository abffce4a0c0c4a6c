#pragma once

namespace convcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace convcert
