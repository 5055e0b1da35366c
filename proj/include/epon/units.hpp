#ifndef EPON_UNITS_HPP
#define EPON_UNITS_HPP

#include <string>
#include <string_view>

namespace epon {

// Parse a duration into seconds. Accepts a plain number (seconds) or a
// number with a "us", "ms" or "s" suffix: "350us", "0.5ms", "60s".
// Throws ConfigError on anything else.
double parse_duration_s(std::string_view text);

// Shortest text that round-trips the exact double (17 significant digits).
std::string format_full(double value);

}  // namespace epon

#endif  // EPON_UNITS_HPP
