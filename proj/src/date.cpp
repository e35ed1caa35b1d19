#include "tweetq/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace tweetq {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count)
{
    int value = 0;
    auto first = text.data() + pos;
    auto last = first + count;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("malformed date '" + std::string(text) + "'");
    return value;
}

} // namespace

Date parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw std::invalid_argument("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    const int y = parse_digits(text, 0, 4);
    const int m = parse_digits(text, 5, 2);
    const int d = parse_digits(text, 8, 2);
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date '" + std::string(text) + "'");
    return Date{ymd};
}

std::string format_date(Date d)
{
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date day_of(std::int64_t epoch_seconds)
{
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    if (epoch_seconds % kSecondsPerDay < 0)
        --days;
    return Date{std::chrono::days{days}};
}

std::int64_t day_start(Date d)
{
    return static_cast<std::int64_t>(d.time_since_epoch().count()) * kSecondsPerDay;
}

} // namespace tweetq
