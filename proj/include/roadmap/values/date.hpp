#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace roadmap {

/// Dates are month indices: year * 12 + (month - 1), so Jan of year 0 is 0.
/// Durations are plain month counts.
constexpr long long month_index(long long year, int month) { return year * 12 + (month - 1); }

/// "Jan".."Dec" to 1..12.
std::optional<int> month_from_abbrev(std::string_view abbrev);

/// "Jun2021" style rendering of a month index.
std::string month_year(long long index);
/// ISO "2021-06" rendering of a month index.
std::string iso_month(long long index);
/// Parses "YYYY-MM"; rejects anything else.
std::optional<long long> parse_iso_month(std::string_view text);

}  // namespace roadmap
