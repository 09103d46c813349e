#pragma once

#include <string>

namespace tomokit {

// Locale-independent rendering with 10 significant digits, used for every emitted number.
std::string format_number(double v);
inline std::string format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace tomokit
