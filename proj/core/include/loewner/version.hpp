#pragma once

namespace loewner {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace loewner
