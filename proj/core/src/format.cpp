#include "rllq/format.hpp"

#include <array>
#include <charconv>

namespace rllq {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                    std::chars_format::scientific, 16);
  return std::string(buf.data(), result.ptr);
}

}  // namespace rllq
