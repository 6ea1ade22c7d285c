#pragma once

namespace bibscore {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kModelFormatVersion = "1";

}  // namespace bibscore
