#pragma once

#include "tweetq/date.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tweetq {

/// One tweet with its engagement attributes.
struct TweetRecord {
    std::string id;
    std::int64_t timestamp = 0; ///< UTC epoch seconds
    std::string text;
    std::int64_t followers = 0;
    std::int64_t comments = 0;
    std::int64_t likes = 0;
    std::int64_t retweets = 0;

    bool operator==(const TweetRecord&) const = default;
};

struct PricePoint {
    Date date;
    double price = 0.0; ///< USD, two fraction digits

    bool operator==(const PricePoint&) const = default;
};

/// Contiguous daily closing prices. Dates strictly increase by one day.
class PriceSeries {
public:
    PriceSeries() = default;

    /// Validates ordering, contiguity and positivity. Throws ValidationError.
    static PriceSeries from_points(std::vector<PricePoint> points,
                                   double price_max = std::numeric_limits<double>::infinity());

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const PricePoint& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }
    const std::vector<PricePoint>& points() const noexcept { return points_; }

    Date first_day() const { return points_.front().date; }
    Date last_day() const { return points_.back().date; }

    /// Position of `d` in the series, if covered.
    std::optional<std::size_t> index_of(Date d) const;

    std::vector<double> prices() const;

    /// Days [first, last). Contiguity is inherited.
    PriceSeries slice(std::size_t first, std::size_t last) const;

    bool operator==(const PriceSeries&) const = default;

private:
    std::vector<PricePoint> points_;
};

/// Tweets posted on one UTC day.
template <class T>
struct DayBucketOf {
    Date date;
    std::vector<T> tweets;
};

using DayBucket = DayBucketOf<TweetRecord>;

enum class CorpusFormat { Csv, Jsonl };

CorpusFormat parse_corpus_format(std::string_view name);

/// Half-open interval of epoch seconds [begin, end).
struct TimeWindow {
    std::int64_t begin = std::numeric_limits<std::int64_t>::min();
    std::int64_t end = std::numeric_limits<std::int64_t>::max();

    bool contains(std::int64_t t) const noexcept { return t >= begin && t < end; }

    /// Window covering every day of `series`.
    static TimeWindow covering(const PriceSeries& series);
};

struct TweetLoad {
    std::vector<TweetRecord> records;
    std::size_t out_of_window = 0; ///< valid rows dropped by the window
};

/// Loads a tweet corpus. Every row is validated (counts >= 0, non-blank text,
/// unique ids); rows outside `window` are dropped and counted.
/// Throws ParseError for malformed rows and ValidationError for invariant
/// violations, both naming the offending line.
TweetLoad load_tweets(const std::filesystem::path& path, CorpusFormat format,
                      const TimeWindow& window = {});
TweetLoad read_tweets(std::istream& in, CorpusFormat format, const TimeWindow& window = {});

void write_tweets(std::ostream& out, std::span<const TweetRecord> tweets, CorpusFormat format);
void save_tweets(const std::filesystem::path& path, std::span<const TweetRecord> tweets,
                 CorpusFormat format);

constexpr double kDefaultPriceMax = 100000.0;

/// Loads a `date,price` CSV. Prices are rounded half-up to cents on ingest.
PriceSeries load_prices(const std::filesystem::path& path, double price_max = kDefaultPriceMax);
PriceSeries read_prices(std::istream& in, double price_max = kDefaultPriceMax);

void write_prices(std::ostream& out, const PriceSeries& series);
void save_prices(const std::filesystem::path& path, const PriceSeries& series);

/// Rounds a decimal literal half-up to two fraction digits, exactly.
/// Throws std::invalid_argument if `text` is not a plain decimal.
double parse_price(std::string_view text);

/// Round-half-up to cents for computed values.
double round_cents(double value);

template <class T>
struct Bucketing {
    std::vector<DayBucketOf<T>> buckets;
    std::size_t dropped = 0; ///< records falling outside the series days
};

/// One bucket per series day, in series order; input order preserved within
/// a bucket.
Bucketing<TweetRecord> bucket_by_day(std::span<const TweetRecord> tweets, const PriceSeries& series);

} // namespace tweetq
