#include "epon/units.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "epon/errors.hpp"

namespace epon {

double parse_duration_s(std::string_view text) {
  std::string s(text);
  // Trim surrounding whitespace.
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ConfigError("duration: empty string");

  double scale = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "us") == 0) {
    scale = 1e-6;
    s.resize(s.size() - 2);
  } else if (s.size() >= 2 && s.compare(s.size() - 2, 2, "ms") == 0) {
    scale = 1e-3;
    s.resize(s.size() - 2);
  } else if (s.size() >= 1 && s.back() == 's') {
    s.pop_back();
  }

  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError("duration: cannot parse '" + std::string(text) + "'");
  }
  return v * scale;
}

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace epon
