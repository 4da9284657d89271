#ifndef VARLEX_CSV_HPP
#define VARLEX_CSV_HPP

#include <cstdio>
#include <string>

namespace varlex {

/// Formats a real with 17 significant digits (round-trip safe); %g trims
/// trailing zeros so small integers print exactly.
inline std::string csv_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// RFC-4180 quoting for fields that contain commas, quotes or newlines.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace varlex

#endif
