#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace tweetq {

/// Calendar day in UTC.
using Date = std::chrono::sys_days;

constexpr std::int64_t kSecondsPerDay = 86400;

/// Parses `YYYY-MM-DD`. Throws std::invalid_argument on anything else.
Date parse_date(std::string_view text);

std::string format_date(Date d);

/// UTC day containing the epoch timestamp (floor semantics for negatives).
Date day_of(std::int64_t epoch_seconds);

/// Epoch seconds of 00:00:00 UTC on `d`.
std::int64_t day_start(Date d);

} // namespace tweetq
