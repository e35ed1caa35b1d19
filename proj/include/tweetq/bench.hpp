#pragma once

#include "tweetq/attribute_filter.hpp"
#include "tweetq/corpus.hpp"
#include "tweetq/profiler.hpp"
#include "tweetq/qlearn.hpp"
#include "tweetq/sentiment.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tweetq {

enum class BenchMode { FixedTime, FixedTarget };

std::string_view to_string(BenchMode mode);

struct BenchConfig {
    AgentConfig agent;
    RewardKind reward = RewardKind::Cdr;
    Attribute attribute = Attribute::Followers; ///< ranking used by the proposed approach
    double train_fraction = 0.7;
    double profile_interval = 0.1; ///< seconds
};

struct ApproachReport {
    std::string name; ///< "classic" or "proposed"
    ResourceReport resources;
    std::size_t tweets_utilized = 0; ///< tweets passed to sentiment scoring
    double wall_seconds = 0.0;       ///< preprocessing + sentiment + training
    double final_vaf = 0.0;          ///< test-split VAF of the last model
    int episodes_run = 0;
    bool converged = true;        ///< fixed_target only: reached the target
    bool budget_exhausted = false; ///< training stopped by the clock
    std::vector<double> actuals;
    std::vector<double> predictions;
};

struct ComparisonReport {
    BenchMode mode = BenchMode::FixedTime;
    double budget_seconds = 0.0; ///< fixed_time budget or fixed_target timeout
    double target_vaf = 0.0;     ///< fixed_target only
    ApproachReport classic;
    ApproachReport proposed;

    std::string to_json() const;
};

/// Both pipelines, run one after the other, each training until cfg.agent.episodes
/// episodes are done or `duration` seconds have passed since the pipeline began.
/// Throws ArgumentError when duration < 10.
ComparisonReport run_fixed_time(std::span<const TweetRecord> tweets, const PriceSeries& prices,
                                const Lexicon& lex, double duration, const BenchConfig& cfg);

/// Each pipeline trains one episode at a time until its test VAF reaches
/// `target_vaf` or `timeout` seconds pass (then converged = false). The VAF is
/// checked before the first episode too, so a warm-start model that already
/// meets the target returns without training.
ComparisonReport run_to_target(std::span<const TweetRecord> tweets, const PriceSeries& prices,
                               const Lexicon& lex, double target_vaf, double timeout, const BenchConfig& cfg,
                               const std::optional<QModel>& warm_start = std::nullopt);

} // namespace tweetq
