#include "adaptivetrend/time.h"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace adaptivetrend {

using namespace std::chrono;

Date date_of(Timestamp ts) {
    return floor<days>(sys_seconds{seconds{ts}});
}

Timestamp to_timestamp(Date d) {
    return sys_seconds{d}.time_since_epoch().count();
}

YearMonth year_month_of(Timestamp ts) {
    const year_month_day ymd{date_of(ts)};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

Timestamp month_start(YearMonth ym) {
    return to_timestamp(sys_days{year{ym.year} / month{ym.month} / day{1}});
}

YearMonth next_month(YearMonth ym) {
    if (ym.month == 12) return {ym.year + 1, 1};
    return {ym.year, ym.month + 1};
}

YearMonth prev_month(YearMonth ym) {
    if (ym.month == 1) return {ym.year - 1, 12};
    return {ym.year, ym.month - 1};
}

namespace {

int parse_int(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const int y = parse_int(text.substr(0, 4));
    const int m = parse_int(text.substr(5, 2));
    const int d = parse_int(text.substr(8, 2));
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    }
    return sys_days{ymd};
}

std::string format_date(Date d) {
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_year_month(YearMonth ym) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", ym.year, ym.month);
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    if (text.find('-') != std::string_view::npos && text.size() == 10) {
        return to_timestamp(parse_date(text));
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a timestamp: '" + std::string(text) + "'");
    }
    return v;
}

double bars_per_year(std::int64_t interval_seconds) {
    if (interval_seconds <= 0) throw std::invalid_argument("interval must be positive");
    return static_cast<double>(kSecondsPerYear) / static_cast<double>(interval_seconds);
}

}  // namespace adaptivetrend
