#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace adaptivetrend {

/// UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86'400;
inline constexpr std::int64_t kSecondsPerYear = 31'536'000;  // 365 days
inline constexpr std::int64_t kH6Interval = 21'600;

using Date = std::chrono::sys_days;

struct YearMonth {
    int year = 1970;
    unsigned month = 1;  // 1..12

    friend bool operator==(const YearMonth&, const YearMonth&) = default;
    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

Date date_of(Timestamp ts);
Timestamp to_timestamp(Date d);
YearMonth year_month_of(Timestamp ts);

/// 00:00 UTC of calendar day 1 of the given month.
Timestamp month_start(YearMonth ym);
YearMonth next_month(YearMonth ym);
YearMonth prev_month(YearMonth ym);

/// Parses `YYYY-MM-DD`; throws std::invalid_argument on malformed input.
Date parse_date(std::string_view text);
std::string format_date(Date d);
std::string format_year_month(YearMonth ym);

/// Accepts either integer epoch seconds or `YYYY-MM-DD` (midnight UTC).
Timestamp parse_timestamp(std::string_view text);

/// Seconds-per-year divided by bar interval; 1460 for 6-hour bars.
double bars_per_year(std::int64_t interval_seconds);

}  // namespace adaptivetrend
