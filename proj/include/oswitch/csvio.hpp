#pragma once

#include <string>
#include <vector>

namespace oswitch {

/// Splits a CSV line on commas. No quoting support; the project's file
/// formats never embed commas in fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Strict double parse; `what` names the field in the error message.
double parse_double(const std::string& text, const std::string& what);

/// Strict integer parse.
long parse_long(const std::string& text, const std::string& what);

/// Trims ASCII whitespace on both ends.
std::string trim(const std::string& s);

} // namespace oswitch
