#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sea::csv {

/// Shortest text that parses back to exactly the same double.
std::string number(double value);

/// Fixed-precision text for human-facing tables.
std::string fixed(double value, int precision);

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace sea::csv
