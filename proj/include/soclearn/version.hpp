#pragma once

namespace soclearn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace soclearn
