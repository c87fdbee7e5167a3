#pragma once

// Flat `key = value` text files with `#` comments, and locale-independent
// number formatting shared by the record and CLI output code.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tunnelkit {

/// Entries in file order; keys may repeat (e.g. one `site` line per site).
using KeyValueList = std::vector<std::pair<std::string, std::string>>;

/// Throws DomainError with the 1-based line number on malformed lines.
KeyValueList parse_key_values(std::string_view text);
KeyValueList read_key_value_file(const std::string& path);

/// Last value for `key`, or nullptr.
const std::string* find_last(const KeyValueList& list, std::string_view key);

double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

/// Shortest representation that round-trips to the same double.
std::string format_shortest(double value);
/// `digits` significant digits, general notation.
std::string format_significant(double value, int digits);

}  // namespace tunnelkit
