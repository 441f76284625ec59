#pragma once

#include <string>

namespace rllq {

/// Scientific notation with 17 significant digits, e.g.
/// "-5.0000000000000000e-01". Round-trips every finite double.
std::string format_double(double value);

}  // namespace rllq
