#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coauthlp {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

/// Lowercase, trim, collapse internal whitespace runs to one space.
std::string normalize_label(std::string_view s);

/// Splits one CSV record. Handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv(std::string_view line);

/// Quotes a field if it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

std::optional<long long> parse_int(std::string_view s) noexcept;
std::optional<double> parse_double(std::string_view s) noexcept;

/// Shortest representation that round-trips (e.g. 4.04 -> "4.04").
std::string format_number(double v);

}  // namespace coauthlp
