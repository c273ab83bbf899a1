#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bfp::detail {

using CsvRow = std::vector<std::string>;

/// Splits RFC 4180-style text into rows. Quoted fields may contain commas,
/// doubled quotes and newlines. Blank lines are skipped; a leading UTF-8 BOM
/// is dropped. Unquoted fields are trimmed of surrounding spaces.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace bfp::detail
