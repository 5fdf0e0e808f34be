#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace catqkd::csv {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// Splits one CSV line on commas (no quoting; our files never need it).
std::vector<std::string> split_line(std::string_view line);

/// Parses a field written by format_double. Throws std::invalid_argument.
double parse_double(std::string_view field);

}  // namespace catqkd::csv
