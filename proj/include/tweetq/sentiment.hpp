#pragma once

#include "tweetq/preprocess.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tweetq {

/// Token -> valence map. Tokens are stored lowercase.
class Lexicon {
public:
    Lexicon() = default;

    /// Reads `token<TAB>valence` lines; extra tab-separated columns are
    /// ignored so the published VADER lexicon loads unchanged.
    /// Throws ParseError on a bad valence and ValidationError on a token that
    /// collides after lowercasing.
    static Lexicon load(const std::filesystem::path& path);
    static Lexicon parse(std::istream& in);

    /// The lexicon shipped with the library (also data/lexicon.tsv).
    static const Lexicon& builtin();

    /// Inserts a token; returns false if it was already present.
    bool insert(std::string token, double valence);

    std::optional<double> find(std::string_view token) const;
    std::size_t size() const noexcept { return entries_.size(); }

    /// Entries sorted by token, for stable output.
    std::vector<std::pair<std::string, double>> sorted_entries() const;

    void write(std::ostream& out) const;

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
    };
    std::unordered_map<std::string, double, Hash, std::equal_to<>> entries_;
};

/// Compound score in [-1, 1].
struct SentimentScore {
    double compound = 0.0;
};

constexpr double kCompoundNormalization = 15.0;
constexpr double kExclamationBoost = 1.292;
constexpr int kMaxExclamations = 3;

/// Sums valences of whitespace tokens found in the lexicon and maps the sum
/// s to s / sqrt(s^2 + 15). Up to three trailing '!' on a matched token
/// multiply its valence by 1.292 each.
SentimentScore score(std::string_view clean_text, const Lexicon& lex);

double normalize_compound(double valence_sum);

struct DailySignal {
    Date date;
    double mean_compound = 0.0;
    std::size_t tweet_count = 0;

    bool operator==(const DailySignal&) const = default;
};

/// Unweighted mean of per-tweet compounds; an empty day yields (0, 0).
DailySignal daily_signal(const CleanBucket& bucket, const Lexicon& lex);
std::vector<DailySignal> daily_signals(std::span<const CleanBucket> buckets, const Lexicon& lex);

/// `date,mean_compound,tweet_count` CSV; compounds round-trip exactly.
void write_signals(std::ostream& out, std::span<const DailySignal> signals);
void save_signals(const std::filesystem::path& path, std::span<const DailySignal> signals);
std::vector<DailySignal> read_signals(std::istream& in);
std::vector<DailySignal> load_signals(const std::filesystem::path& path);

} // namespace tweetq
