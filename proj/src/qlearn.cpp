#include "tweetq/qlearn.hpp"

#include "tweetq/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <string>

namespace tweetq {

namespace {

constexpr std::array<char, 4> kModelMagic = {'T', 'W', 'Q', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw ArgumentError(what);
}

// Fixed-width little-endian encoding.
template <class T>
void put(std::ostream& out, T value)
{
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>)
        bits = std::bit_cast<std::uint64_t>(value);
    else
        bits = static_cast<std::uint64_t>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.put(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

template <class T>
T get(std::istream& in)
{
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof())
            throw Error("model file truncated");
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    if constexpr (std::is_same_v<T, double>)
        return std::bit_cast<double>(bits);
    else if constexpr (std::is_signed_v<T>)
        return static_cast<T>(static_cast<std::make_unsigned_t<T>>(bits));
    else
        return static_cast<T>(bits);
}

void check_alignment(const PriceSeries& prices, std::span<const DailySignal> signals)
{
    if (prices.size() != signals.size())
        throw ArgumentError("misaligned inputs: " + std::to_string(prices.size()) + " prices vs " +
                            std::to_string(signals.size()) + " signals");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i].date != signals[i].date)
            throw ArgumentError("misaligned inputs: price day " + format_date(prices[i].date) +
                                " vs signal day " + format_date(signals[i].date));
    }
}

double step_reward(RewardKind kind, double ap, double pp, double ap_prev, double pp_prev)
{
    switch (kind) {
    case RewardKind::Sdr: return reward_sdr(ap, pp);
    case RewardKind::Rdr: return reward_rdr(ap, pp);
    case RewardKind::Cdr: return reward_cdr(zero_reward_points(ap, ap_prev, pp_prev), ap, pp);
    }
    return 0.0;
}

} // namespace

std::string_view to_string(RewardKind kind)
{
    switch (kind) {
    case RewardKind::Sdr: return "sdr";
    case RewardKind::Rdr: return "rdr";
    case RewardKind::Cdr: return "cdr";
    }
    return "unknown";
}

RewardKind parse_reward_kind(std::string_view name)
{
    if (name == "sdr")
        return RewardKind::Sdr;
    if (name == "rdr")
        return RewardKind::Rdr;
    if (name == "cdr")
        return RewardKind::Cdr;
    throw ArgumentError("unknown reward '" + std::string(name) + "' (expected sdr|rdr|cdr)");
}

std::string_view to_string(StateMode mode)
{
    return mode == StateMode::Sentiment ? "sentiment" : "price-only";
}

StateMode parse_state_mode(std::string_view name)
{
    if (name == "sentiment")
        return StateMode::Sentiment;
    if (name == "price-only")
        return StateMode::PriceOnly;
    throw ArgumentError("unknown state mode '" + std::string(name) + "' (expected sentiment|price-only)");
}

void AgentConfig::validate() const
{
    require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
    require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
    require(action_min < action_max, "action_min must be below action_max");
    require(action_min >= -100000 && action_max <= 100000, "action range too large");
    require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon_start must lie in [0, 1]");
    require(epsilon_end >= 0.0 && epsilon_end <= 1.0, "epsilon_end must lie in [0, 1]");
    require(epsilon_end <= epsilon_start, "epsilon_end must not exceed epsilon_start");
    require(episodes > 0, "episodes must be positive");
    require(price_max > 0.0 && std::isfinite(price_max), "price_max must be positive");
    require(price_bucket_width > 0.0, "price_bucket_width must be positive");
    require(price_bucket_width < price_max, "price_bucket_width must be below price_max");
    require(sentiment_bins > 0 && sentiment_bins % 2 == 1, "sentiment_bins must be an odd positive integer");
    require(static_cast<double>(state_count()) * static_cast<double>(action_count()) <= 5e8,
            "Q-table too large");
}

int AgentConfig::price_bins() const
{
    return static_cast<int>(std::ceil(price_max / price_bucket_width));
}

int AgentConfig::sentiment_states() const
{
    return state_mode == StateMode::Sentiment ? sentiment_bins : 1;
}

std::size_t AgentConfig::state_count() const
{
    return static_cast<std::size_t>(price_bins()) * static_cast<std::size_t>(sentiment_states());
}

std::size_t AgentConfig::action_count() const
{
    return static_cast<std::size_t>(action_max - action_min + 1);
}

QModel::QModel(const AgentConfig& cfg) : cfg_(cfg)
{
    cfg_.validate();
    states_ = cfg_.state_count();
    actions_ = cfg_.action_count();
    table_.assign(states_ * actions_, 0.0);
}

std::size_t QModel::state_index(State s) const
{
    if (s.price_bin < 0 || s.price_bin >= cfg_.price_bins() || s.sentiment_bin < 0 ||
        s.sentiment_bin >= cfg_.sentiment_states())
        throw ArgumentError("state (" + std::to_string(s.price_bin) + ", " + std::to_string(s.sentiment_bin) +
                            ") out of range");
    return static_cast<std::size_t>(s.price_bin) * static_cast<std::size_t>(cfg_.sentiment_states()) +
           static_cast<std::size_t>(s.sentiment_bin);
}

std::size_t QModel::action_index(Action a) const
{
    if (a.percent < cfg_.action_min || a.percent > cfg_.action_max)
        throw ArgumentError("action " + std::to_string(a.percent) + " out of range");
    return static_cast<std::size_t>(a.percent - cfg_.action_min);
}

Action QModel::action_at(std::size_t index) const
{
    return Action{cfg_.action_min + static_cast<int>(index)};
}

double QModel::value(State s, Action a) const
{
    return table_[state_index(s) * actions_ + action_index(a)];
}

void QModel::set(State s, Action a, double q)
{
    table_[state_index(s) * actions_ + action_index(a)] = q;
}

std::span<const double> QModel::row(State s) const
{
    return std::span<const double>(table_).subspan(state_index(s) * actions_, actions_);
}

Action QModel::greedy(State s) const
{
    const auto r = row(s);
    // max_element returns the first maximum, i.e. the smallest percent.
    return action_at(static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin()));
}

double QModel::max_value(State s) const
{
    const auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

void QModel::write(std::ostream& out) const
{
    out.write(kModelMagic.data(), kModelMagic.size());
    put<std::uint32_t>(out, kModelVersion);
    put<double>(out, cfg_.gamma);
    put<double>(out, cfg_.theta);
    put<std::int32_t>(out, cfg_.action_min);
    put<std::int32_t>(out, cfg_.action_max);
    put<double>(out, cfg_.epsilon_start);
    put<double>(out, cfg_.epsilon_end);
    put<std::int32_t>(out, cfg_.episodes);
    put<double>(out, cfg_.price_bucket_width);
    put<double>(out, cfg_.price_max);
    put<std::int32_t>(out, cfg_.sentiment_bins);
    put<std::uint64_t>(out, cfg_.seed);
    put<std::uint8_t>(out, cfg_.state_mode == StateMode::Sentiment ? 0 : 1);
    put<std::uint64_t>(out, states_);
    put<std::uint64_t>(out, actions_);
    for (double q : table_)
        put<double>(out, q);
}

QModel QModel::read(std::istream& in)
{
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kModelMagic)
        throw Error("not a Q-model file (bad magic)");
    const auto version = get<std::uint32_t>(in);
    if (version != kModelVersion)
        throw Error("unsupported Q-model version " + std::to_string(version));
    AgentConfig cfg;
    cfg.gamma = get<double>(in);
    cfg.theta = get<double>(in);
    cfg.action_min = get<std::int32_t>(in);
    cfg.action_max = get<std::int32_t>(in);
    cfg.epsilon_start = get<double>(in);
    cfg.epsilon_end = get<double>(in);
    cfg.episodes = get<std::int32_t>(in);
    cfg.price_bucket_width = get<double>(in);
    cfg.price_max = get<double>(in);
    cfg.sentiment_bins = get<std::int32_t>(in);
    cfg.seed = get<std::uint64_t>(in);
    const auto mode = get<std::uint8_t>(in);
    if (mode > 1)
        throw Error("corrupt Q-model file (state mode)");
    cfg.state_mode = mode == 0 ? StateMode::Sentiment : StateMode::PriceOnly;

    QModel model(cfg);
    const auto states = get<std::uint64_t>(in);
    const auto actions = get<std::uint64_t>(in);
    if (states != model.states_ || actions != model.actions_)
        throw Error("corrupt Q-model file (table dimensions disagree with config)");
    for (double& q : model.table_) {
        q = get<double>(in);
        if (!std::isfinite(q))
            throw Error("corrupt Q-model file (non-finite entry)");
    }
    return model;
}

void QModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    write(out);
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

QModel QModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    return read(in);
}

State discretize_state(double prev_price, const DailySignal& prev_signal, const AgentConfig& cfg)
{
    if (!(prev_price > 0.0) || !(prev_price < cfg.price_max))
        throw ArgumentError("price " + std::to_string(prev_price) + " outside (0, price_max)");
    State s;
    s.price_bin = std::clamp(static_cast<int>(std::floor(prev_price / cfg.price_bucket_width)), 0,
                             cfg.price_bins() - 1);
    if (cfg.state_mode == StateMode::Sentiment) {
        const double pos = (prev_signal.mean_compound + 1.0) / 2.0 * cfg.sentiment_bins;
        s.sentiment_bin = std::clamp(static_cast<int>(std::floor(pos)), 0, cfg.sentiment_bins - 1);
    }
    return s;
}

double predicted_price(double prev_price, Action a)
{
    const double raw = prev_price * (1.0 + a.percent / 100.0);
    return round_cents(std::max(0.0, raw));
}

double reward_sdr(double ap, double pp)
{
    return -std::abs(ap - pp);
}

double reward_rdr(double ap, double pp)
{
    if (!(ap > 0.0))
        throw ArgumentError("relative reward needs a positive actual price");
    return -std::abs(ap - pp) / ap * 100.0;
}

ZeroRewardGeometry zero_reward_points(double ap_t, double ap_prev, double pp_prev, double rel_tolerance)
{
    if (!(ap_prev > 0.0))
        throw ArgumentError("zero-reward geometry needs a positive previous price");
    ZeroRewardGeometry g;
    g.alpha = (ap_t - ap_prev) / ap_prev;
    const double scaled = pp_prev * (1.0 + g.alpha);
    g.l = std::abs(ap_t - scaled);
    g.zr1 = ap_t - g.l;
    g.zr2 = ap_t + g.l;
    g.epsilon_l = rel_tolerance * std::abs(ap_t);
    g.degenerate = g.l < g.epsilon_l || g.l == 0.0;
    return g;
}

double reward_cdr(const ZeroRewardGeometry& geom, double ap, double pp)
{
    if (geom.degenerate) {
        if (std::abs(pp - ap) <= geom.epsilon_l)
            return 100.0;
        return reward_rdr(ap, pp);
    }
    if (pp <= ap)
        return (pp - geom.zr1) / (ap - geom.zr1) * 100.0;
    return (pp - geom.zr2) / (ap - geom.zr2) * 100.0;
}

double q_update(QModel& model, State s, Action a, double reward, State next)
{
    if (!std::isfinite(reward))
        throw ArgumentError("non-finite reward");
    const auto& cfg = model.config();
    const double old = model.value(s, a);
    const double target = reward + cfg.gamma * model.max_value(next);
    const double updated = old + cfg.theta * (target - old);
    model.set(s, a, updated);
    return updated;
}

Action select_action(const QModel& model, State s, double epsilon, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
        const auto& cfg = model.config();
        std::uniform_int_distribution<int> pick(cfg.action_min, cfg.action_max);
        return Action{pick(rng)};
    }
    return model.greedy(s);
}

Trainer::Trainer(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
                 const AgentConfig& cfg)
    : Trainer(prices, signals, kind, QModel(cfg))
{
}

Trainer::Trainer(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
                 QModel model)
    : model_(std::move(model)), kind_(kind), rng_(model_.config().seed)
{
    check_alignment(prices, signals);
    if (prices.size() < 3)
        throw ArgumentError("training needs at least 3 days, got " + std::to_string(prices.size()));
    prices_ = prices.prices();
    states_.reserve(prices_.size());
    for (std::size_t t = 0; t < prices_.size(); ++t)
        states_.push_back(discretize_state(prices_[t], signals[t], model_.config()));
}

double Trainer::epsilon_for(int episode) const
{
    const auto& cfg = model_.config();
    if (episode >= cfg.episodes - 1)
        return cfg.epsilon_end;
    const double frac = static_cast<double>(episode) / static_cast<double>(cfg.episodes - 1);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

double Trainer::run_episode()
{
    const double epsilon = epsilon_for(episodes_run_);
    double pp_prev = prices_[0];
    double total = 0.0;
    for (std::size_t t = 1; t < prices_.size(); ++t) {
        const State s = states_[t - 1];
        const Action a = select_action(model_, s, epsilon, rng_);
        const double pp = predicted_price(prices_[t - 1], a);
        const double r = step_reward(kind_, prices_[t], pp, prices_[t - 1], pp_prev);
        q_update(model_, s, a, r, states_[t]);
        pp_prev = pp;
        total += r;
    }
    const double mean = total / static_cast<double>(prices_.size() - 1);
    log_.mean_reward.push_back(mean);
    ++episodes_run_;
    return mean;
}

TrainResult train(const PriceSeries& prices, std::span<const DailySignal> signals, RewardKind kind,
                  const AgentConfig& cfg)
{
    Trainer trainer(prices, signals, kind, cfg);
    for (int e = 0; e < cfg.episodes; ++e)
        trainer.run_episode();
    TrainLog log = trainer.log();
    return {std::move(trainer).take_model(), std::move(log)};
}

std::vector<double> predict_series(const QModel& model, const PriceSeries& prices,
                                   std::span<const DailySignal> signals)
{
    check_alignment(prices, signals);
    std::vector<double> out;
    if (prices.size() < 2)
        return out;
    out.reserve(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) {
        const State s = discretize_state(prices[t - 1].price, signals[t - 1], model.config());
        out.push_back(predicted_price(prices[t - 1].price, model.greedy(s)));
    }
    return out;
}

std::size_t train_length(std::size_t days, double fraction)
{
    if (days < 5)
        throw ArgumentError("need at least 5 days to split into train and test");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ArgumentError("train_fraction must lie in (0, 1)");
    auto n = static_cast<std::size_t>(std::floor(static_cast<double>(days) * fraction));
    return std::clamp<std::size_t>(n, 3, days - 1);
}

DataSplit split_train_test(const PriceSeries& prices, std::span<const DailySignal> signals,
                           std::size_t train_days)
{
    check_alignment(prices, signals);
    if (train_days < 3 || train_days >= prices.size())
        throw ArgumentError("train_days must lie in [3, days)");
    DataSplit split;
    split.train_prices = prices.slice(0, train_days);
    split.train_signals.assign(signals.begin(), signals.begin() + static_cast<std::ptrdiff_t>(train_days));
    split.test_prices = prices.slice(train_days - 1, prices.size());
    split.test_signals.assign(signals.begin() + static_cast<std::ptrdiff_t>(train_days - 1), signals.end());
    return split;
}

std::vector<double> test_actuals(const DataSplit& split)
{
    auto all = split.test_prices.prices();
    if (all.empty())
        return all;
    return {all.begin() + 1, all.end()};
}

} // namespace tweetq
