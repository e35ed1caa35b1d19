#pragma once

#include "tweetq/preprocess.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace tweetq {

enum class Attribute { Followers, Comments, Likes, Retweets };

inline constexpr std::array<Attribute, 4> kAllAttributes = {
    Attribute::Followers, Attribute::Comments, Attribute::Likes, Attribute::Retweets};

std::string_view to_string(Attribute attr);
Attribute parse_attribute(std::string_view name);

std::int64_t attribute_value(const TweetRecord& tweet, Attribute attr);

/// Tweets of one day, highest `attr` first.
struct FilteredCorpus {
    Attribute attribute;
    std::vector<CleanBucket> buckets;
};

/// Sorts by `attr` descending (ties: earlier timestamp, then smaller id) and
/// keeps the first ceil(n/2).
CleanBucket rank_and_halve(const CleanBucket& bucket, Attribute attr);

FilteredCorpus build_dataset(const std::vector<CleanBucket>& buckets, Attribute attr);

} // namespace tweetq
