#include "tomokit/report.hpp"

#include <fmt/format.h>

namespace tomokit {

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    return fmt::format("{:.10g}", v);
}

}  // namespace tomokit
