#pragma once

#include "tweetq/corpus.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tweetq {

/// A tweet together with its normalized text.
struct CleanTweet {
    TweetRecord original;
    std::string clean_text;
};

using CleanBucket = DayBucketOf<CleanTweet>;

/// Normalizes raw tweet text. Steps, applied in this order and repeated until
/// the text stops changing:
///   lowercase, drop URLs and leading "rt", drop @mentions, strip '#',
///   ".." runs to a space, character runs capped at 3, whitespace collapsed,
///   trim.
/// The result is always a fixed point: clean(clean(x)) == clean(x).
std::string clean(std::string_view text);

/// Cleans every tweet; tweets whose clean text is empty are dropped.
std::vector<CleanBucket> clean_buckets(const std::vector<DayBucket>& buckets);

/// Wraps records whose text is already clean (e.g. a preprocessed corpus file).
std::vector<CleanBucket> adopt_clean(const std::vector<DayBucket>& buckets);

/// Per-day exact-duplicate removal on clean_text. The survivor of each group
/// is the earliest tweet by (timestamp, id); survivors keep their input order.
std::vector<CleanBucket> dedup(std::vector<CleanBucket> buckets);

/// Flattens buckets back to records carrying the clean text.
std::vector<TweetRecord> to_records(const std::vector<CleanBucket>& buckets);

} // namespace tweetq
