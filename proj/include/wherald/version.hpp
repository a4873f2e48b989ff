#pragma once

namespace wherald {

inline constexpr const char* kEngineName = "wherald";
inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace wherald
