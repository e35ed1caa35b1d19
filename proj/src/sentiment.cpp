#include "tweetq/sentiment.hpp"

#include "csv.hpp"
#include "tweetq/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace tweetq {

namespace {

struct BuiltinEntry {
    std::string_view token;
    double valence;
};

// Keep in sync with data/lexicon.tsv.
constexpr BuiltinEntry kBuiltinLexicon[] = {
    {"amazing", 2.8},   {"awesome", 3.1},  {"awful", -2.0},     {"bad", -2.5},
    {"bearish", -2.0},  {"best", 3.2},     {"bullish", 2.0},    {"crash", -2.0},
    {"dump", -1.6},     {"excellent", 2.7}, {"excited", 2.2},   {"fail", -2.5},
    {"fear", -2.2},     {"gain", 2.0},     {"good", 1.9},       {"great", 3.1},
    {"happy", 2.7},     {"hate", -2.7},    {"horrible", -2.5},  {"lose", -1.7},
    {"loss", -1.3},     {"love", 3.2},     {"moon", 1.5},       {"nice", 1.8},
    {"optimistic", 2.4}, {"panic", -2.3},  {"profit", 1.8},     {"rally", 1.7},
    {"sad", -2.1},      {"scam", -2.6},    {"strong", 2.3},     {"terrible", -2.1},
    {"weak", -1.9},     {"win", 2.8},      {"worried", -1.9},   {"worst", -3.1},
};

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

Lexicon Lexicon::parse(std::istream& in)
{
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(lineno, "valence", "expected token<TAB>valence");
        const auto end = line.find('\t', tab + 1);
        const std::string_view field =
            std::string_view(line).substr(tab + 1, end == std::string::npos ? std::string::npos : end - tab - 1);
        double valence = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), valence);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(valence))
            throw ParseError(lineno, "valence", "not a number: '" + std::string(field) + "'");
        std::string token = to_lower(std::string_view(line).substr(0, tab));
        if (token.empty())
            throw ParseError(lineno, "token", "empty token");
        if (!lex.insert(token, valence))
            throw ValidationError(lineno, "duplicate token '" + token + "'");
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open lexicon '" + path.string() + "'");
    return parse(in);
}

const Lexicon& Lexicon::builtin()
{
    static const Lexicon lex = [] {
        Lexicon l;
        for (const auto& e : kBuiltinLexicon)
            l.insert(std::string(e.token), e.valence);
        return l;
    }();
    return lex;
}

bool Lexicon::insert(std::string token, double valence)
{
    return entries_.emplace(to_lower(token), valence).second;
}

std::optional<double> Lexicon::find(std::string_view token) const
{
    auto it = entries_.find(token);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::string, double>> Lexicon::sorted_entries() const
{
    std::vector<std::pair<std::string, double>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end());
    return out;
}

void Lexicon::write(std::ostream& out) const
{
    for (const auto& [token, valence] : sorted_entries()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", valence);
        out << token << '\t' << buf << '\n';
    }
}

double normalize_compound(double valence_sum)
{
    return valence_sum / std::sqrt(valence_sum * valence_sum + kCompoundNormalization);
}

SentimentScore score(std::string_view text, const Lexicon& lex)
{
    double sum = 0.0;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ')
            ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ')
            ++j;
        if (j == i)
            break;
        const std::string_view token = text.substr(i, j - i);
        i = j;

        if (auto v = lex.find(token)) {
            sum += *v;
            continue;
        }
        std::size_t bangs = 0;
        while (bangs < token.size() && token[token.size() - 1 - bangs] == '!')
            ++bangs;
        if (bangs == 0 || bangs == token.size())
            continue;
        if (auto v = lex.find(token.substr(0, token.size() - bangs))) {
            const int boosts = static_cast<int>(std::min<std::size_t>(bangs, kMaxExclamations));
            sum += *v * std::pow(kExclamationBoost, boosts);
        }
    }
    return {normalize_compound(sum)};
}

DailySignal daily_signal(const CleanBucket& bucket, const Lexicon& lex)
{
    DailySignal signal{bucket.date, 0.0, bucket.tweets.size()};
    if (bucket.tweets.empty())
        return signal;
    double total = 0.0;
    for (const auto& t : bucket.tweets)
        total += score(t.clean_text, lex).compound;
    signal.mean_compound = total / static_cast<double>(bucket.tweets.size());
    return signal;
}

std::vector<DailySignal> daily_signals(std::span<const CleanBucket> buckets, const Lexicon& lex)
{
    std::vector<DailySignal> out;
    out.reserve(buckets.size());
    for (const auto& b : buckets)
        out.push_back(daily_signal(b, lex));
    return out;
}

void write_signals(std::ostream& out, std::span<const DailySignal> signals)
{
    out << "date,mean_compound,tweet_count\n";
    for (const auto& s : signals)
        out << format_date(s.date) << ',' << format_double(s.mean_compound) << ',' << s.tweet_count << '\n';
}

void save_signals(const std::filesystem::path& path, std::span<const DailySignal> signals)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    write_signals(out, signals);
}

std::vector<DailySignal> read_signals(std::istream& in)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    std::vector<DailySignal> out;
    if (!reader.next(fields))
        return out;
    if (fields != std::vector<std::string>{"date", "mean_compound", "tweet_count"})
        throw ParseError(reader.line(), "header", "expected date,mean_compound,tweet_count");
    while (reader.next(fields)) {
        const std::size_t line = reader.line();
        if (fields.size() != 3)
            throw ParseError(line, "record", "expected 3 fields");
        DailySignal s;
        try {
            s.date = parse_date(fields[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, "date", e.what());
        }
        const auto& mc = fields[1];
        auto [p1, e1] = std::from_chars(mc.data(), mc.data() + mc.size(), s.mean_compound);
        if (mc.empty() || e1 != std::errc{} || p1 != mc.data() + mc.size())
            throw ParseError(line, "mean_compound", "not a number");
        if (s.mean_compound < -1.0 || s.mean_compound > 1.0)
            throw ValidationError(line, "mean_compound outside [-1, 1]");
        const auto& tc = fields[2];
        auto [p2, e2] = std::from_chars(tc.data(), tc.data() + tc.size(), s.tweet_count);
        if (tc.empty() || e2 != std::errc{} || p2 != tc.data() + tc.size())
            throw ParseError(line, "tweet_count", "not a non-negative integer");
        if (s.tweet_count == 0 && s.mean_compound != 0.0)
            throw ValidationError(line, "empty day must have mean_compound 0");
        out.push_back(s);
    }
    return out;
}

std::vector<DailySignal> load_signals(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    return read_signals(in);
}

} // namespace tweetq
