#include "msmm/csv.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

#include "msmm/errors.hpp"

namespace msmm::csv {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
      current.clear();
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

std::vector<std::vector<std::string>> read(std::istream& in, bool allow_comments) {
  std::vector<std::vector<std::string>> records;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (allow_comments && stripped.front() == '#') continue;
    records.push_back(split_line(line));
  }
  return records;
}

std::string format(double value) {
  if (std::isnan(value)) return "NA";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& field, std::string_view context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty())
    throw SchemaError("cannot parse '" + field + "' as a number (" + std::string(context) + ")");
  return value;
}

long parse_long(const std::string& field, std::string_view context) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw SchemaError("cannot parse '" + field + "' as an integer (" + std::string(context) + ")");
  return value;
}

}  // namespace msmm::csv
