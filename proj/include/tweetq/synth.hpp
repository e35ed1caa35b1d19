#pragma once

#include "tweetq/corpus.hpp"

#include <cstdint>
#include <vector>

namespace tweetq {

struct SynthConfig {
    int days = 1000;
    int tweets_per_day = 200;
    double rho = 0.8;          ///< target corr(follower-half sentiment_d, return_{d+1})
    double base_price = 1000.0;
    double daily_vol = 0.04;   ///< std of daily log-returns
    std::uint64_t seed = 0;

    /// Throws ArgumentError naming the first bad field.
    void validate() const;

    bool operator==(const SynthConfig&) const = default;
};

struct SynthCorpus {
    std::vector<TweetRecord> tweets; ///< sorted by (timestamp, id)
    PriceSeries prices;
};

/// First calendar day of every generated corpus.
Date synth_start_day();

/// Deterministic corpus with a sentiment signal planted in each day's
/// top-follower half.
///
/// Each day draws two latent factors. The top half of tweets by follower
/// count lean positive with probability Phi(z_d), the bottom half with
/// Phi(w_d), so only the follower ordering carries z. Comments, likes and
/// retweets are drawn independently of that split. After all tweets exist,
/// the realized top-half mean compound m_d is standardized over days and
/// drives the next day's log-return:
///   r_{d+1} = vol * (rho * m~_d + sqrt(1 - rho^2) * eps_{d+1}).
/// Every day uses its own RNG stream derived from (seed, day).
SynthCorpus gen_corpus(const SynthConfig& cfg);

} // namespace tweetq
