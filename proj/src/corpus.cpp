#include "tweetq/corpus.hpp"

#include "csv.hpp"
#include "tweetq/error.hpp"

#include "json.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace tweetq {

namespace {

constexpr std::array<std::string_view, 7> kTweetColumns = {
    "id", "timestamp", "text", "followers", "comments", "likes", "retweets"};

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

std::int64_t parse_int(std::string_view text, std::size_t line, std::string_view field)
{
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError(line, std::string(field), "expected an integer, got '" + std::string(text) + "'");
    return value;
}

bool blank(std::string_view s)
{
    return s.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
}

// Shared validation for both formats.
class RowValidator {
public:
    explicit RowValidator(const TimeWindow& window) : window_(window) {}

    void accept(TweetRecord rec, std::size_t line, TweetLoad& load)
    {
        const std::pair<std::string_view, std::int64_t> counts[] = {
            {"followers", rec.followers}, {"comments", rec.comments},
            {"likes", rec.likes}, {"retweets", rec.retweets}};
        for (const auto& [name, value] : counts) {
            if (value < 0)
                throw ValidationError(line, std::string(name) + " must be non-negative, got " +
                                                std::to_string(value));
        }
        if (rec.id.empty())
            throw ValidationError(line, "id must not be empty");
        if (blank(rec.text))
            throw ValidationError(line, "text must not be blank");
        if (!ids_.insert(rec.id).second)
            throw ValidationError(line, "duplicate id '" + rec.id + "'");
        if (!window_.contains(rec.timestamp)) {
            ++load.out_of_window;
            return;
        }
        load.records.push_back(std::move(rec));
    }

private:
    TimeWindow window_;
    std::unordered_set<std::string> ids_;
};

TweetLoad read_csv_tweets(std::istream& in, const TimeWindow& window)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    TweetLoad load;
    if (!reader.next(fields))
        return load;

    std::array<std::size_t, kTweetColumns.size()> column{};
    for (std::size_t k = 0; k < kTweetColumns.size(); ++k) {
        auto it = std::find(fields.begin(), fields.end(), kTweetColumns[k]);
        if (it == fields.end())
            throw ParseError(reader.line(), std::string(kTweetColumns[k]), "missing column in header");
        column[k] = static_cast<std::size_t>(it - fields.begin());
    }
    const std::size_t width = fields.size();

    RowValidator validator(window);
    while (reader.next(fields)) {
        const std::size_t line = reader.line();
        if (fields.size() != width)
            throw ParseError(line, "record", "expected " + std::to_string(width) + " fields, got " +
                                                 std::to_string(fields.size()));
        TweetRecord rec;
        rec.id = fields[column[0]];
        rec.timestamp = parse_int(fields[column[1]], line, "timestamp");
        rec.text = fields[column[2]];
        rec.followers = parse_int(fields[column[3]], line, "followers");
        rec.comments = parse_int(fields[column[4]], line, "comments");
        rec.likes = parse_int(fields[column[5]], line, "likes");
        rec.retweets = parse_int(fields[column[6]], line, "retweets");
        validator.accept(std::move(rec), line, load);
    }
    return load;
}

TweetLoad read_jsonl_tweets(std::istream& in, const TimeWindow& window)
{
    TweetLoad load;
    RowValidator validator(window);
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (blank(text))
            continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line, "record", e.what());
        }
        if (!obj.is_object())
            throw ParseError(line, "record", "expected a JSON object");

        auto get_string = [&](std::string_view key) {
            auto it = obj.find(key);
            if (it == obj.end())
                throw ParseError(line, std::string(key), "missing");
            if (!it->is_string())
                throw ParseError(line, std::string(key), "expected a string");
            return it->get<std::string>();
        };
        auto get_int = [&](std::string_view key) {
            auto it = obj.find(key);
            if (it == obj.end())
                throw ParseError(line, std::string(key), "missing");
            if (!it->is_number_integer())
                throw ParseError(line, std::string(key), "expected an integer");
            return it->get<std::int64_t>();
        };

        TweetRecord rec;
        rec.id = get_string("id");
        rec.timestamp = get_int("timestamp");
        rec.text = get_string("text");
        rec.followers = get_int("followers");
        rec.comments = get_int("comments");
        rec.likes = get_int("likes");
        rec.retweets = get_int("retweets");
        validator.accept(std::move(rec), line, load);
    }
    return load;
}

std::string format_price(double price)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", price);
    return buf;
}

} // namespace

PriceSeries PriceSeries::from_points(std::vector<PricePoint> points, double price_max)
{
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.price > 0.0))
            throw ValidationError("price on " + format_date(p.date) + " must be positive");
        if (!(p.price < price_max))
            throw ValidationError("price on " + format_date(p.date) + " exceeds price_max");
        if (i == 0)
            continue;
        const Date prev = points[i - 1].date;
        if (p.date <= prev)
            throw ValidationError("dates out of order: " + format_date(p.date) + " follows " +
                                  format_date(prev));
        if (p.date != prev + std::chrono::days{1})
            throw ValidationError("missing day " + format_date(prev + std::chrono::days{1}));
    }
    PriceSeries series;
    series.points_ = std::move(points);
    return series;
}

std::optional<std::size_t> PriceSeries::index_of(Date d) const
{
    if (points_.empty() || d < first_day() || d > last_day())
        return std::nullopt;
    return static_cast<std::size_t>((d - first_day()).count());
}

std::vector<double> PriceSeries::prices() const
{
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_)
        out.push_back(p.price);
    return out;
}

PriceSeries PriceSeries::slice(std::size_t first, std::size_t last) const
{
    if (first > last || last > points_.size())
        throw ArgumentError("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                            ") out of range for series of length " + std::to_string(points_.size()));
    PriceSeries out;
    out.points_.assign(points_.begin() + static_cast<std::ptrdiff_t>(first),
                       points_.begin() + static_cast<std::ptrdiff_t>(last));
    return out;
}

CorpusFormat parse_corpus_format(std::string_view name)
{
    if (name == "csv")
        return CorpusFormat::Csv;
    if (name == "jsonl")
        return CorpusFormat::Jsonl;
    throw ArgumentError("unknown corpus format '" + std::string(name) + "' (expected csv|jsonl)");
}

TimeWindow TimeWindow::covering(const PriceSeries& series)
{
    if (series.empty())
        return TimeWindow{0, 0};
    return TimeWindow{day_start(series.first_day()), day_start(series.last_day()) + kSecondsPerDay};
}

TweetLoad read_tweets(std::istream& in, CorpusFormat format, const TimeWindow& window)
{
    return format == CorpusFormat::Csv ? read_csv_tweets(in, window) : read_jsonl_tweets(in, window);
}

TweetLoad load_tweets(const std::filesystem::path& path, CorpusFormat format, const TimeWindow& window)
{
    auto in = open_input(path);
    return read_tweets(in, format, window);
}

void write_tweets(std::ostream& out, std::span<const TweetRecord> tweets, CorpusFormat format)
{
    if (format == CorpusFormat::Jsonl) {
        for (const auto& t : tweets) {
            nlohmann::ordered_json obj;
            obj["id"] = t.id;
            obj["timestamp"] = t.timestamp;
            obj["text"] = t.text;
            obj["followers"] = t.followers;
            obj["comments"] = t.comments;
            obj["likes"] = t.likes;
            obj["retweets"] = t.retweets;
            out << obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
        }
        return;
    }
    out << "id,timestamp,text,followers,comments,likes,retweets\n";
    for (const auto& t : tweets) {
        csv::write_field(out, t.id);
        out << ',' << t.timestamp << ',';
        csv::write_field(out, t.text);
        out << ',' << t.followers << ',' << t.comments << ',' << t.likes << ',' << t.retweets << '\n';
    }
}

void save_tweets(const std::filesystem::path& path, std::span<const TweetRecord> tweets, CorpusFormat format)
{
    auto out = open_output(path);
    write_tweets(out, tweets, format);
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

double parse_price(std::string_view text)
{
    auto fail = [&] { return std::invalid_argument("malformed price '" + std::string(text) + "'"); };
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
        negative = text[i++] == '-';
    std::int64_t whole = 0;
    std::size_t digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
        if (digits >= 15)
            throw fail();
        whole = whole * 10 + (text[i] - '0');
    }
    std::int64_t cents = 0;
    std::size_t frac_digits = 0;
    bool round_up = false;
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++frac_digits) {
            const int digit = text[i] - '0';
            if (frac_digits < 2)
                cents = cents * 10 + digit;
            else if (frac_digits == 2)
                round_up = digit >= 5;
        }
    }
    if (i != text.size() || digits + frac_digits == 0)
        throw fail();
    if (frac_digits == 1)
        cents *= 10;
    std::int64_t total = whole * 100 + cents + (round_up ? 1 : 0);
    const double value = static_cast<double>(total) / 100.0;
    return negative ? -value : value;
}

double round_cents(double value)
{
    return std::round(value * 100.0) / 100.0;
}

PriceSeries read_prices(std::istream& in, double price_max)
{
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields))
        return {};
    auto date_col = std::find(fields.begin(), fields.end(), "date");
    auto price_col = std::find(fields.begin(), fields.end(), "price");
    if (date_col == fields.end())
        throw ParseError(reader.line(), "date", "missing column in header");
    if (price_col == fields.end())
        throw ParseError(reader.line(), "price", "missing column in header");
    const auto di = static_cast<std::size_t>(date_col - fields.begin());
    const auto pi = static_cast<std::size_t>(price_col - fields.begin());
    const std::size_t width = fields.size();

    std::vector<PricePoint> points;
    while (reader.next(fields)) {
        const std::size_t line = reader.line();
        if (fields.size() != width)
            throw ParseError(line, "record", "expected " + std::to_string(width) + " fields");
        PricePoint p;
        try {
            p.date = parse_date(fields[di]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, "date", e.what());
        }
        try {
            p.price = parse_price(fields[pi]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line, "price", e.what());
        }
        if (!(p.price > 0.0))
            throw ValidationError(line, "price must be positive, got " + fields[pi]);
        if (!(p.price < price_max))
            throw ValidationError(line, "price " + fields[pi] + " is not below price_max " +
                                            format_price(price_max));
        if (!points.empty()) {
            const Date prev = points.back().date;
            if (p.date <= prev)
                throw ValidationError(line, "dates out of order: " + fields[di] + " follows " +
                                                format_date(prev));
            if (p.date != prev + std::chrono::days{1})
                throw ValidationError(line, "missing day " + format_date(prev + std::chrono::days{1}));
        }
        points.push_back(p);
    }
    return PriceSeries::from_points(std::move(points), price_max);
}

PriceSeries load_prices(const std::filesystem::path& path, double price_max)
{
    auto in = open_input(path);
    return read_prices(in, price_max);
}

void write_prices(std::ostream& out, const PriceSeries& series)
{
    out << "date,price\n";
    for (const auto& p : series)
        out << format_date(p.date) << ',' << format_price(p.price) << '\n';
}

void save_prices(const std::filesystem::path& path, const PriceSeries& series)
{
    auto out = open_output(path);
    write_prices(out, series);
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

Bucketing<TweetRecord> bucket_by_day(std::span<const TweetRecord> tweets, const PriceSeries& series)
{
    Bucketing<TweetRecord> result;
    result.buckets.reserve(series.size());
    for (const auto& p : series)
        result.buckets.push_back({p.date, {}});
    for (const auto& t : tweets) {
        auto idx = series.index_of(day_of(t.timestamp));
        if (!idx) {
            ++result.dropped;
            continue;
        }
        result.buckets[*idx].tweets.push_back(t);
    }
    return result;
}

} // namespace tweetq
