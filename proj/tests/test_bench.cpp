#include "support.hpp"

#include "tweetq/bench.hpp"
#include "tweetq/error.hpp"
#include "tweetq/metrics.hpp"
#include "tweetq/preprocess.hpp"
#include "tweetq/synth.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

using namespace tweetq;

namespace {

SynthCorpus small_corpus(std::uint64_t seed = 3)
{
    SynthConfig s;
    s.days = 60;
    s.tweets_per_day = 30;
    s.seed = seed;
    return gen_corpus(s);
}

BenchConfig small_bench()
{
    BenchConfig b;
    b.agent.episodes = 40;
    b.agent.action_min = -10;
    b.agent.action_max = 10;
    b.agent.sentiment_bins = 5;
    b.agent.seed = 9;
    b.profile_interval = 0.05;
    return b;
}

} // namespace

TEST(Bench, FixedTimeRejectsShortBudget)
{
    auto c = small_corpus();
    EXPECT_THROW(run_fixed_time(c.tweets, c.prices, Lexicon::builtin(), 5.0, small_bench()), ArgumentError);
}

TEST(Bench, FixedTimeIsDeterministicAndHalvesTweets)
{
    auto c = small_corpus();
    auto cfg = small_bench();
    auto a = run_fixed_time(c.tweets, c.prices, Lexicon::builtin(), 10.0, cfg);
    auto b = run_fixed_time(c.tweets, c.prices, Lexicon::builtin(), 10.0, cfg);
    EXPECT_EQ(a.mode, BenchMode::FixedTime);
    EXPECT_LE(a.proposed.tweets_utilized, a.classic.tweets_utilized);
    EXPECT_GT(a.proposed.tweets_utilized, 0u);
    for (auto [x, y] : {std::pair{&a.classic, &b.classic}, std::pair{&a.proposed, &b.proposed}}) {
        EXPECT_EQ(x->tweets_utilized, y->tweets_utilized);
        EXPECT_EQ(x->final_vaf, y->final_vaf);
        EXPECT_EQ(x->predictions, y->predictions);
        EXPECT_EQ(x->episodes_run, cfg.agent.episodes);
        EXPECT_FALSE(x->budget_exhausted);
        EXPECT_EQ(x->final_vaf, vaf(x->actuals, x->predictions));
        EXPECT_LE(x->resources.cpu.min, x->resources.cpu.avg);
        EXPECT_LE(x->resources.cpu.avg, x->resources.cpu.max);
    }
    EXPECT_EQ(a.classic.name, "classic");
    EXPECT_EQ(a.proposed.name, "proposed");

    auto j = nlohmann::json::parse(a.to_json());
    EXPECT_EQ(j["mode"], "fixed_time");
    EXPECT_TRUE(j["proposed"].contains("tweets_utilized"));
    EXPECT_TRUE(j["classic"]["resources"].contains("cpu_pct"));
}

TEST(Bench, TweetsUtilizedMatchesPipelineCounts)
{
    auto c = small_corpus(4);
    auto r = run_to_target(c.tweets, c.prices, Lexicon::builtin(), -1e300, 5.0, small_bench());
    auto cleaned = dedup(clean_buckets(bucket_by_day(c.tweets, c.prices).buckets));
    std::size_t all = 0, half = 0;
    for (const auto& b : cleaned) {
        all += b.tweets.size();
        half += (b.tweets.size() + 1) / 2;
    }
    EXPECT_EQ(r.classic.tweets_utilized, all);
    EXPECT_EQ(r.proposed.tweets_utilized, half);
    EXPECT_EQ(r.classic.episodes_run, 0);
    EXPECT_TRUE(r.classic.converged);
}

TEST(Bench, TrainedWarmStartReturnsImmediately)
{
    auto c = small_corpus(5);
    auto cfg = small_bench();
    const auto& lex = Lexicon::builtin();

    // Train the classic model outside the harness and measure its test VAF.
    auto cleaned = dedup(clean_buckets(bucket_by_day(c.tweets, c.prices).buckets));
    auto sig = daily_signals(cleaned, lex);
    auto split = split_train_test(c.prices, sig, train_length(c.prices.size(), cfg.train_fraction));
    auto model = train(split.train_prices, split.train_signals, cfg.reward, cfg.agent).model;
    const double current = vaf(test_actuals(split), predict_series(model, split.test_prices, split.test_signals));

    auto r = run_to_target(c.tweets, c.prices, lex, current, 30.0, cfg, model);
    EXPECT_EQ(r.mode, BenchMode::FixedTarget);
    EXPECT_TRUE(r.classic.converged);
    EXPECT_EQ(r.classic.episodes_run, 0);
    EXPECT_DOUBLE_EQ(r.classic.final_vaf, current);
    EXPECT_LT(r.classic.wall_seconds, 5.0);
}

TEST(Bench, UnreachableTargetTimesOut)
{
    auto c = small_corpus(6);
    auto r = run_to_target(c.tweets, c.prices, Lexicon::builtin(), 1000.0, 2.0, small_bench());
    for (const auto* a : {&r.classic, &r.proposed}) {
        EXPECT_FALSE(a->converged);
        EXPECT_TRUE(a->budget_exhausted);
        EXPECT_GT(a->episodes_run, 0);
        EXPECT_GE(a->wall_seconds, 2.0);
        EXPECT_LT(a->wall_seconds, 4.0);
    }
    auto j = nlohmann::json::parse(r.to_json());
    EXPECT_EQ(j["target_vaf"].get<double>(), 1000.0);
    EXPECT_FALSE(j["classic"]["converged"].get<bool>());
}
