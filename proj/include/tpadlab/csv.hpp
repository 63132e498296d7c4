#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tpadlab::csv {

/// Decimal form with 12 significant digits; identical across runs.
std::string format_number(double value);

/// Splits one CSV line on commas; surrounding whitespace of each cell is trimmed.
std::vector<std::string> split_line(std::string_view line);

/// Parses a whole cell as a double. Returns false on any trailing garbage.
bool parse_number(std::string_view cell, double& out);

}  // namespace tpadlab::csv
