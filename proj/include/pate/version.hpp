#pragma once

#include <string_view>

#define PATE_VERSION_MAJOR 0
#define PATE_VERSION_MINOR 1
#define PATE_VERSION_PATCH 0

namespace pate {
inline constexpr std::string_view version = "0.1.0";
}
