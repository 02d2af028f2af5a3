#pragma once

namespace pgchoice {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pgchoice
