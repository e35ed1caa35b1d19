#include "tweetq/bench.hpp"

#include "tweetq/error.hpp"
#include "tweetq/metrics.hpp"
#include "tweetq/preprocess.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>

namespace tweetq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Prepared {
    std::vector<DailySignal> signals;
    std::size_t utilized = 0;
};

Prepared prepare(std::span<const TweetRecord> tweets, const PriceSeries& prices, const Lexicon& lex,
                 bool proposed, Attribute attr)
{
    auto bucketed = bucket_by_day(tweets, prices);
    auto cleaned = dedup(clean_buckets(bucketed.buckets));
    if (proposed)
        cleaned = build_dataset(cleaned, attr).buckets;
    Prepared p;
    for (const auto& b : cleaned)
        p.utilized += b.tweets.size();
    p.signals = daily_signals(cleaned, lex);
    return p;
}

double test_vaf(const QModel& model, const DataSplit& split, const std::vector<double>& actuals,
                std::vector<double>& predictions)
{
    predictions = predict_series(model, split.test_prices, split.test_signals);
    return vaf(actuals, predictions);
}

struct StopRule {
    double budget = 0.0;
    std::optional<double> target;
    int max_episodes = 0; ///< ignored when target is set
};

ApproachReport run_approach(const char* name, bool proposed, std::span<const TweetRecord> tweets,
                            const PriceSeries& prices, const Lexicon& lex, const BenchConfig& cfg,
                            const StopRule& rule, const std::optional<QModel>& warm_start)
{
    ApproachReport rep;
    rep.name = name;
    Profiler profiler(cfg.profile_interval);
    const auto t0 = Clock::now();

    Prepared prep = prepare(tweets, prices, lex, proposed, cfg.attribute);
    rep.tweets_utilized = prep.utilized;
    const DataSplit split =
        split_train_test(prices, prep.signals, train_length(prices.size(), cfg.train_fraction));
    rep.actuals = test_actuals(split);

    Trainer trainer = warm_start ? Trainer(split.train_prices, split.train_signals, cfg.reward, *warm_start)
                                 : Trainer(split.train_prices, split.train_signals, cfg.reward, cfg.agent);

    if (rule.target) {
        rep.final_vaf = test_vaf(trainer.model(), split, rep.actuals, rep.predictions);
        rep.converged = rep.final_vaf >= *rule.target;
        while (!rep.converged) {
            if (seconds_since(t0) >= rule.budget) {
                rep.budget_exhausted = true;
                break;
            }
            trainer.run_episode();
            rep.final_vaf = test_vaf(trainer.model(), split, rep.actuals, rep.predictions);
            rep.converged = rep.final_vaf >= *rule.target;
        }
    } else {
        while (trainer.episodes_run() < rule.max_episodes) {
            if (seconds_since(t0) >= rule.budget) {
                rep.budget_exhausted = true;
                break;
            }
            trainer.run_episode();
        }
        rep.final_vaf = test_vaf(trainer.model(), split, rep.actuals, rep.predictions);
    }
    rep.episodes_run = trainer.episodes_run();
    rep.wall_seconds = seconds_since(t0);
    rep.resources = profiler.stop();
    return rep;
}

nlohmann::ordered_json approach_json(const ApproachReport& a)
{
    nlohmann::ordered_json j;
    j["tweets_utilized"] = a.tweets_utilized;
    j["wall_seconds"] = a.wall_seconds;
    j["final_vaf"] = a.final_vaf;
    j["episodes_run"] = a.episodes_run;
    j["converged"] = a.converged;
    j["budget_exhausted"] = a.budget_exhausted;
    j["resources"] = nlohmann::ordered_json::parse(a.resources.to_json());
    return j;
}

} // namespace

std::string_view to_string(BenchMode mode)
{
    return mode == BenchMode::FixedTime ? "fixed_time" : "fixed_target";
}

std::string ComparisonReport::to_json() const
{
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(mode));
    j["budget_seconds"] = budget_seconds;
    if (mode == BenchMode::FixedTarget)
        j["target_vaf"] = target_vaf;
    j["classic"] = approach_json(classic);
    j["proposed"] = approach_json(proposed);
    return j.dump(2);
}

ComparisonReport run_fixed_time(std::span<const TweetRecord> tweets, const PriceSeries& prices,
                                const Lexicon& lex, double duration, const BenchConfig& cfg)
{
    if (!(duration >= 10.0))
        throw ArgumentError("fixed-time budget must be at least 10 seconds");
    cfg.agent.validate();
    ComparisonReport r;
    r.mode = BenchMode::FixedTime;
    r.budget_seconds = duration;
    const StopRule rule{duration, std::nullopt, cfg.agent.episodes};
    r.classic = run_approach("classic", false, tweets, prices, lex, cfg, rule, std::nullopt);
    r.proposed = run_approach("proposed", true, tweets, prices, lex, cfg, rule, std::nullopt);
    return r;
}

ComparisonReport run_to_target(std::span<const TweetRecord> tweets, const PriceSeries& prices,
                               const Lexicon& lex, double target_vaf, double timeout, const BenchConfig& cfg,
                               const std::optional<QModel>& warm_start)
{
    if (!std::isfinite(target_vaf))
        throw ArgumentError("target_vaf must be finite");
    if (!(timeout > 0.0))
        throw ArgumentError("timeout must be positive");
    cfg.agent.validate();
    ComparisonReport r;
    r.mode = BenchMode::FixedTarget;
    r.budget_seconds = timeout;
    r.target_vaf = target_vaf;
    const StopRule rule{timeout, target_vaf, 0};
    r.classic = run_approach("classic", false, tweets, prices, lex, cfg, rule, warm_start);
    r.proposed = run_approach("proposed", true, tweets, prices, lex, cfg, rule, warm_start);
    return r;
}

} // namespace tweetq
