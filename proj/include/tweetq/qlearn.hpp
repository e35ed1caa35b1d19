#pragma once

#include "tweetq/corpus.hpp"
#include "tweetq/sentiment.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace tweetq {

enum class RewardKind { Sdr, Rdr, Cdr };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view name);

/// Sentiment mode augments the price state with the prior day's compound
/// signal; price-only is the literal price-state MDP.
enum class StateMode { Sentiment, PriceOnly };

std::string_view to_string(StateMode mode);
StateMode parse_state_mode(std::string_view name);

struct AgentConfig {
    double gamma = 0.95;   ///< discount factor
    double theta = 0.1;    ///< learning rate
    int action_min = -100; ///< percent
    int action_max = 1000; ///< percent
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    int episodes = 500;
    double price_bucket_width = 500.0;
    double price_max = kDefaultPriceMax;
    int sentiment_bins = 21;
    std::uint64_t seed = 0;
    StateMode state_mode = StateMode::Sentiment;

    /// Throws ArgumentError naming the first bad field.
    void validate() const;

    int price_bins() const;
    /// 1 in price-only mode.
    int sentiment_states() const;
    std::size_t state_count() const;
    std::size_t action_count() const;

    bool operator==(const AgentConfig&) const = default;
};

struct State {
    int price_bin = 0;
    int sentiment_bin = 0;

    bool operator==(const State&) const = default;
};

struct Action {
    int percent = 0;

    bool operator==(const Action&) const = default;
};

/// Dense Q-table over (State, Action), row-major by state.
class QModel {
public:
    explicit QModel(const AgentConfig& cfg);

    const AgentConfig& config() const noexcept { return cfg_; }
    std::size_t state_count() const noexcept { return states_; }
    std::size_t action_count() const noexcept { return actions_; }

    /// Throws ArgumentError for out-of-range states/actions.
    std::size_t state_index(State s) const;
    std::size_t action_index(Action a) const;
    Action action_at(std::size_t index) const;

    double value(State s, Action a) const;
    void set(State s, Action a, double q);

    std::span<const double> row(State s) const;

    /// argmax_a Q(s, a); ties go to the smallest percent.
    Action greedy(State s) const;
    double max_value(State s) const;

    const std::vector<double>& table() const noexcept { return table_; }

    void write(std::ostream& out) const;
    static QModel read(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static QModel load(const std::filesystem::path& path);

    bool operator==(const QModel&) const = default;

private:
    AgentConfig cfg_;
    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    std::vector<double> table_;
};

/// price_bin = floor(prev_price / width), sentiment_bin = floor((c + 1) / 2 * bins),
/// both clamped. Throws ArgumentError unless 0 < prev_price < price_max.
State discretize_state(double prev_price, const DailySignal& prev_signal, const AgentConfig& cfg);

/// prev_price * (1 + percent / 100), floored at 0 and rounded to cents.
double predicted_price(double prev_price, Action a);

/// -|ap - pp|
double reward_sdr(double ap, double pp);

/// -|ap - pp| / ap * 100. Throws ArgumentError when ap <= 0.
double reward_rdr(double ap, double pp);

/// The two points at distance l either side of the actual price where the
/// comparative reward crosses zero.
struct ZeroRewardGeometry {
    double alpha = 0.0; ///< actual rate of change (ap_t - ap_prev) / ap_prev
    double l = 0.0;
    double zr1 = 0.0;
    double zr2 = 0.0;
    double epsilon_l = 0.0; ///< absolute degeneracy threshold
    bool degenerate = false; ///< l < epsilon_l

    double actual() const noexcept { return zr1 + l; }
};

constexpr double kDegenerateRelTolerance = 1e-9;

/// l = |ap_t - pp_prev * (1 + alpha)|, zr1 = ap_t - l, zr2 = ap_t + l.
/// Throws ArgumentError when ap_prev <= 0.
ZeroRewardGeometry zero_reward_points(double ap_t, double ap_prev, double pp_prev,
                                      double rel_tolerance = kDegenerateRelTolerance);

/// Piecewise-linear reward: 100 at ap, 0 at zr1/zr2. Degenerate geometry
/// gives 100 for an exact hit and falls back to reward_rdr otherwise.
double reward_cdr(const ZeroRewardGeometry& geom, double ap, double pp);

/// Q(s,a) += theta * (r + gamma * max_a' Q(s',a') - Q(s,a)); returns the new
/// value. Throws ArgumentError for a non-finite reward.
double q_update(QModel& model, State s, Action a, double reward, State next);

/// Epsilon-greedy: uniform over the action range with probability epsilon,
/// greedy otherwise.
Action select_action(const QModel& model, State s, double epsilon, std::mt19937_64& rng);

struct TrainLog {
    std::vector<double> mean_reward; ///< one entry per episode
};

/// Episode-by-episode Q-learning over a price series. An episode is one
/// chronological pass: step t acts from (AP[t-1], signal[t-1]) and is
/// rewarded against AP[t].
class Trainer {
public:
    /// Throws ArgumentError on misaligned inputs or a series shorter than 3.
    Trainer(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
            const AgentConfig& cfg);
    /// Continues training an existing model.
    Trainer(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
            QModel model);

    /// Runs one episode and returns its mean reward.
    double run_episode();

    /// Linear decay from epsilon_start to epsilon_end over cfg.episodes, then
    /// held at epsilon_end.
    double epsilon_for(int episode) const;

    int episodes_run() const noexcept { return episodes_run_; }
    const QModel& model() const noexcept { return model_; }
    const TrainLog& log() const noexcept { return log_; }

    QModel take_model() && { return std::move(model_); }

private:
    QModel model_;
    RewardKind kind_;
    std::vector<double> prices_;
    std::vector<State> states_; // state observed after day t
    std::mt19937_64 rng_;
    int episodes_run_ = 0;
    TrainLog log_;
};

struct TrainResult {
    QModel model;
    TrainLog log;
};

/// Runs cfg.episodes episodes. Deterministic given cfg.seed.
TrainResult train(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
                  const AgentConfig& cfg);

/// Greedy one-day-ahead predictions PP[t] for t = 1 .. n-1.
std::vector<double> predict_series(const QModel& model, const PriceSeries& prices,
                                   std::span<const DailySignal> signals);

/// Chronological split. The test part starts on the last training day so that
/// every test day has a predecessor to act from.
struct DataSplit {
    PriceSeries train_prices;
    std::vector<DailySignal> train_signals;
    PriceSeries test_prices;
    std::vector<DailySignal> test_signals;
};

/// Number of training days for `fraction`, clamped so both parts have at
/// least 3 and 2 days respectively.
std::size_t train_length(std::size_t days, double fraction);

DataSplit split_train_test(const PriceSeries& prices, std::span<const DailySignal> signals,
                           std::size_t train_days);

/// Actual test prices aligned with predict_series on the test part.
std::vector<double> test_actuals(const DataSplit& split);

} // namespace tweetq
