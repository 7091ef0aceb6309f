#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace msmm::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes and
/// trims surrounding whitespace from unquoted fields.
std::vector<std::string> split_line(std::string_view line);

/// Reads all non-blank records. Lines whose first non-space character is '#'
/// are skipped when `allow_comments` is set.
std::vector<std::vector<std::string>> read(std::istream& in, bool allow_comments = false);

/// Shortest round-trip decimal form of a double.
std::string format(double value);

double parse_double(const std::string& field, std::string_view context);
long parse_long(const std::string& field, std::string_view context);

}  // namespace msmm::csv
