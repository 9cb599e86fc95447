#pragma once

namespace fgt {

inline constexpr const char* engine_version = "fgt 0.1.0";

} // namespace fgt
