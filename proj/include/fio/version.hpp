#pragma once

namespace fio {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fio
