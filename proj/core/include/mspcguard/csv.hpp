#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mspcguard {

/// Shortest round-trip decimal formatting (std::to_chars). parse(format(x))
/// recovers x bit-exactly, which is what makes emitted CSVs reproducible.
std::string format_double(double value);

/// Strict double parser; throws InputFault on trailing garbage.
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace mspcguard
