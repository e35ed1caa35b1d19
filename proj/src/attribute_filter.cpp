#include "tweetq/attribute_filter.hpp"

#include "tweetq/error.hpp"

#include <algorithm>
#include <string>

namespace tweetq {

std::string_view to_string(Attribute attr)
{
    switch (attr) {
    case Attribute::Followers: return "followers";
    case Attribute::Comments: return "comments";
    case Attribute::Likes: return "likes";
    case Attribute::Retweets: return "retweets";
    }
    return "unknown";
}

Attribute parse_attribute(std::string_view name)
{
    for (Attribute a : kAllAttributes) {
        if (to_string(a) == name)
            return a;
    }
    throw ArgumentError("unknown attribute '" + std::string(name) +
                        "' (expected followers|comments|likes|retweets)");
}

std::int64_t attribute_value(const TweetRecord& tweet, Attribute attr)
{
    switch (attr) {
    case Attribute::Followers: return tweet.followers;
    case Attribute::Comments: return tweet.comments;
    case Attribute::Likes: return tweet.likes;
    case Attribute::Retweets: return tweet.retweets;
    }
    return 0;
}

CleanBucket rank_and_halve(const CleanBucket& bucket, Attribute attr)
{
    std::vector<const CleanTweet*> ranked;
    ranked.reserve(bucket.tweets.size());
    for (const auto& t : bucket.tweets)
        ranked.push_back(&t);
    const std::size_t keep = (ranked.size() + 1) / 2;
    const auto mid = ranked.begin() + static_cast<std::ptrdiff_t>(keep);
    std::partial_sort(ranked.begin(), mid, ranked.end(), [attr](const CleanTweet* a, const CleanTweet* b) {
        const auto va = attribute_value(a->original, attr);
        const auto vb = attribute_value(b->original, attr);
        if (va != vb)
            return va > vb;
        if (a->original.timestamp != b->original.timestamp)
            return a->original.timestamp < b->original.timestamp;
        return a->original.id < b->original.id;
    });

    CleanBucket out{bucket.date, {}};
    out.tweets.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
        out.tweets.push_back(*ranked[i]);
    return out;
}

FilteredCorpus build_dataset(const std::vector<CleanBucket>& buckets, Attribute attr)
{
    FilteredCorpus out{attr, {}};
    out.buckets.reserve(buckets.size());
    for (const auto& b : buckets)
        out.buckets.push_back(rank_and_halve(b, attr));
    return out;
}

} // namespace tweetq
