#pragma once

#include <string_view>

namespace lexis {

inline constexpr std::string_view kToolName = "lexis";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace lexis
