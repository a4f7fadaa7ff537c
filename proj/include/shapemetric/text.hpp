// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace shapemetric {

/// Round-trip decimal ("%.17g"); the same double always prints the same bytes.
std::string format_exact(double v);
/// Short form ("%.6g") for tables and charts.
std::string format_short(double v);

std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

/// Strict full-string parses; throw Error(InvalidArgument) naming `what`.
double parse_double(const std::string& text, const std::string& what);
std::size_t parse_size(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what);

}  // namespace shapemetric

namespace shapemetric {

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& text);
/// Rows of fields; quoted fields may contain separators and doubled quotes.
/// Trailing empty line ignored; CRLF tolerated. Throws Error(Format) on an
/// unterminated quote.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace shapemetric
