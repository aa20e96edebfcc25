#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fogbench {

/// Quotes a field when it holds a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// Writes one row terminated by '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Parses quoted CSV. Throws IoError on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

/// Shortest text that reads back to the same double.
std::string format_number(double value);

/// Throws IoError when the text is not a complete number.
double parse_number(std::string_view text);
std::uint64_t parse_unsigned(std::string_view text);

}  // namespace fogbench
