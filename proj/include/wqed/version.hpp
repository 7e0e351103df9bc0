#pragma once

namespace wqed {

inline constexpr const char* kVersion = "wqed 0.1.0";

}  // namespace wqed
