#include "roadmap/values/date.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace roadmap {

namespace {
constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
}  // namespace

std::optional<int> month_from_abbrev(std::string_view abbrev) {
  for (std::size_t i = 0; i < kMonths.size(); ++i)
    if (kMonths[i] == abbrev) return static_cast<int>(i) + 1;
  return std::nullopt;
}

std::string month_year(long long index) {
  long long year = floor_div(index, 12);
  auto month = static_cast<std::size_t>(index - year * 12);
  return std::string(kMonths[month]) + std::to_string(year);
}

std::string iso_month(long long index) {
  long long year = floor_div(index, 12);
  long long month = index - year * 12 + 1;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld", year, month);
  return buf;
}

std::optional<long long> parse_iso_month(std::string_view text) {
  if (text.size() != 7 || text[4] != '-') return std::nullopt;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u})
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
  int year = 0;
  int month = 0;
  std::from_chars(text.data(), text.data() + 4, year);
  std::from_chars(text.data() + 5, text.data() + 7, month);
  if (month < 1 || month > 12) return std::nullopt;
  return month_index(year, month);
}

}  // namespace roadmap
