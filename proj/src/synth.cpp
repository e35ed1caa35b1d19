#include "tweetq/synth.hpp"

#include "tweetq/error.hpp"
#include "tweetq/preprocess.hpp"
#include "tweetq/sentiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace tweetq {

namespace {

constexpr std::array<std::string_view, 18> kPositiveWords = {
    "amazing", "awesome", "best", "bullish", "excellent", "excited", "gain", "good", "great",
    "happy", "love", "moon", "nice", "optimistic", "profit", "rally", "strong", "win"};

constexpr std::array<std::string_view, 18> kNegativeWords = {
    "awful", "bad", "bearish", "crash", "dump", "fail", "fear", "hate", "horrible",
    "lose", "loss", "panic", "sad", "scam", "terrible", "weak", "worried", "worst"};

constexpr std::array<std::string_view, 12> kOpeners = {
    "BTC", "Bitcoin", "bitcoin", "btc price", "The market", "Crypto", "Price action",
    "Today btc", "My bitcoin", "BTC chart", "Bitcoin today", "This week btc"};

constexpr std::array<std::string_view, 10> kClosers = {
    "today", "right now", "this week", "for hodlers", "on the chart", "tonight",
    "so far", "again", "for sure", "i think"};

constexpr std::uint64_t kPriceStream = 0x7072696365ULL; // "price"

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Lowercase word that never repeats a letter twice in a row; injective in i.
std::string tag_for(std::uint64_t i)
{
    std::string out = "tx";
    int prev = -1;
    do {
        const int digit = static_cast<int>(i % 25);
        i /= 25;
        const int c = (prev + 1 + digit) % 26;
        out.push_back(static_cast<char>('a' + c));
        prev = c;
    } while (i > 0);
    return out;
}

std::int64_t heavy_tail(std::mt19937_64& rng, double mu, double sigma)
{
    std::lognormal_distribution<double> dist(mu, sigma);
    return static_cast<std::int64_t>(std::floor(dist(rng)));
}

struct DayDraw {
    std::vector<TweetRecord> tweets;
    std::vector<std::size_t> signal; ///< indices of the top-follower half
};

DayDraw draw_day(const SynthConfig& cfg, int day, Date date)
{
    auto rng = stream(cfg.seed, static_cast<std::uint64_t>(day), 1);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double z = gauss(rng);
    const double w = gauss(rng);
    const auto n = static_cast<std::size_t>(cfg.tweets_per_day);
    const std::size_t top = (n + 1) / 2;

    // Strictly decreasing follower counts so the top half is unambiguous.
    std::vector<std::int64_t> followers(n);
    for (auto& f : followers)
        f = heavy_tail(rng, 6.0, 2.0);
    std::sort(followers.begin(), followers.end(), std::greater<>());
    for (std::size_t i = n - 1; i-- > 0;)
        followers[i] = std::max(followers[i], followers[i + 1] + 1);

    DayDraw draw;
    draw.tweets.reserve(n);
    const std::int64_t start = day_start(date);
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_signal = i < top;
        const bool positive = unit(rng) < normal_cdf(is_signal ? z : w);
        const auto& words = positive ? kPositiveWords : kNegativeWords;
        std::string word(words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)]);
        if (unit(rng) < 0.1)
            word.append(std::uniform_int_distribution<std::size_t>(1, 3)(rng), '!');

        std::string text;
        if (unit(rng) < 0.2)
            text += "RT @trader" + std::to_string(std::uniform_int_distribution<int>(1, 500)(rng)) + " ";
        text += kOpeners[std::uniform_int_distribution<std::size_t>(0, kOpeners.size() - 1)(rng)];
        text += unit(rng) < 0.5 ? " looks " : "  is ";
        text += word;
        text += ' ';
        text += kClosers[std::uniform_int_distribution<std::size_t>(0, kClosers.size() - 1)(rng)];
        if (unit(rng) < 0.3)
            text += "...";
        text += unit(rng) < 0.5 ? " #bitcoin" : " #BTC";
        if (unit(rng) < 0.3)
            text += " https://t.co/" + tag_for(rng() % 100000);
        text += ' ';
        text += tag_for(i);

        TweetRecord t;
        t.id = "syn-" + std::to_string(day) + "-" + std::to_string(i);
        t.timestamp = start + std::uniform_int_distribution<std::int64_t>(0, kSecondsPerDay - 1)(rng);
        t.text = std::move(text);
        t.followers = followers[i];
        t.comments = heavy_tail(rng, 1.0, 1.2);
        t.likes = heavy_tail(rng, 2.5, 1.5);
        t.retweets = heavy_tail(rng, 1.5, 1.3);
        draw.tweets.push_back(std::move(t));
        if (is_signal)
            draw.signal.push_back(i);
    }
    return draw;
}

} // namespace

void SynthConfig::validate() const
{
    if (days < 3)
        throw ArgumentError("days must be at least 3");
    if (tweets_per_day < 1)
        throw ArgumentError("tweets_per_day must be positive");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw ArgumentError("rho must lie in [0, 1]");
    if (!(base_price > 0.0))
        throw ArgumentError("base_price must be positive");
    if (!(daily_vol > 0.0))
        throw ArgumentError("daily_vol must be positive");
}

Date synth_start_day()
{
    return Date{std::chrono::year{2014} / std::chrono::April / 1};
}

SynthCorpus gen_corpus(const SynthConfig& cfg)
{
    cfg.validate();
    const Date first = synth_start_day();
    const auto& lex = Lexicon::builtin();

    SynthCorpus out;
    out.tweets.reserve(static_cast<std::size_t>(cfg.days) * static_cast<std::size_t>(cfg.tweets_per_day));
    std::vector<double> signal(static_cast<std::size_t>(cfg.days));
    for (int d = 0; d < cfg.days; ++d) {
        auto draw = draw_day(cfg, d, first + std::chrono::days{d});
        double total = 0.0;
        for (std::size_t i : draw.signal)
            total += score(clean(draw.tweets[i].text), lex).compound;
        signal[static_cast<std::size_t>(d)] = total / static_cast<double>(draw.signal.size());
        std::sort(draw.tweets.begin(), draw.tweets.end(), [](const TweetRecord& a, const TweetRecord& b) {
            return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
        });
        std::move(draw.tweets.begin(), draw.tweets.end(), std::back_inserter(out.tweets));
    }

    double mean = 0.0;
    for (double s : signal)
        mean += s;
    mean /= static_cast<double>(signal.size());
    double var = 0.0;
    for (double s : signal)
        var += (s - mean) * (s - mean);
    const double sd = std::sqrt(var / static_cast<double>(signal.size()));

    auto rng = stream(cfg.seed, kPriceStream, 0);
    std::normal_distribution<double> gauss;
    const double idio = std::sqrt(1.0 - cfg.rho * cfg.rho);
    std::vector<PricePoint> points;
    points.reserve(signal.size());
    double price = cfg.base_price;
    for (int d = 0; d < cfg.days; ++d) {
        if (d > 0) {
            const double planted = sd > 0.0 ? (signal[static_cast<std::size_t>(d - 1)] - mean) / sd : 0.0;
            price *= std::exp(cfg.daily_vol * (cfg.rho * planted + idio * gauss(rng)));
        }
        points.push_back({first + std::chrono::days{d}, std::max(0.01, round_cents(price))});
    }
    out.prices = PriceSeries::from_points(std::move(points));
    return out;
}

} // namespace tweetq
