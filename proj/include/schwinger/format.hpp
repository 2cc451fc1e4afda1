#pragma once

#include <string>
#include <string_view>

namespace schwinger {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws ParameterError on trailing garbage.
double parse_double(std::string_view text);
int parse_int(std::string_view text);

} // namespace schwinger
