#include "support.hpp"

#include "tweetq/corpus.hpp"
#include "tweetq/error.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tweetq;

namespace {

const char* kHeader = "id,timestamp,text,followers,comments,likes,retweets\n";

TweetLoad read_csv(const std::string& body, const TimeWindow& w = {})
{
    std::istringstream in(kHeader + body);
    return read_tweets(in, CorpusFormat::Csv, w);
}

template <class Fn>
std::size_t validation_line(Fn fn)
{
    try {
        fn();
    } catch (const ValidationError& e) {
        return e.line();
    }
    return 0;
}

} // namespace

TEST(Corpus, ThreeWellFormedRows)
{
    auto load = read_csv("a,100,hello,1,2,3,4\n"
                         "b,200,\"quoted, text\",0,0,0,0\n"
                         "c,300,bye,5,5,5,5\n");
    ASSERT_EQ(load.records.size(), 3u);
    EXPECT_EQ(load.out_of_window, 0u);
    EXPECT_EQ(load.records[1].text, "quoted, text");
    EXPECT_EQ(load.records[0].retweets, 4);
}

TEST(Corpus, NegativeFollowersNamesLine)
{
    const auto line = validation_line([] { read_csv("a,100,hi,0,0,0,0\nb,100,hi,-1,0,0,0\n"); });
    EXPECT_EQ(line, 3u);
}

TEST(Corpus, DuplicateIdAndBlankTextRejected)
{
    EXPECT_THROW(read_csv("a,100,hi,0,0,0,0\na,200,yo,0,0,0,0\n"), ValidationError);
    EXPECT_THROW(read_csv("a,100,\"   \",0,0,0,0\n"), ValidationError);
}

TEST(Corpus, MalformedRowNamesLineAndField)
{
    try {
        read_csv("a,100,hi,0,0,0,0\nb,xx,hi,0,0,0,0\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.field(), "timestamp");
    }
}

TEST(Corpus, OutOfWindowRowsAreCounted)
{
    TimeWindow w{100, 400};
    auto load = read_csv("a,50,x,0,0,0,0\n"
                         "b,100,x,0,0,0,0\n"
                         "c,250,x,0,0,0,0\n"
                         "d,399,x,0,0,0,0\n"
                         "e,400,x,0,0,0,0\n",
                         w);
    EXPECT_EQ(load.records.size(), 3u);
    EXPECT_EQ(load.out_of_window, 2u);
}

TEST(Corpus, JsonlMatchesCsv)
{
    std::istringstream jl(
        "{\"id\":\"a\",\"timestamp\":100,\"text\":\"hello\",\"followers\":1,\"comments\":2,\"likes\":3,\"retweets\":4}\n"
        "\n"
        "{\"id\":\"b\",\"timestamp\":200,\"text\":\"quoted, text\",\"followers\":0,\"comments\":0,\"likes\":0,"
        "\"retweets\":0}\n");
    auto from_json = read_tweets(jl, CorpusFormat::Jsonl);
    auto from_csv = read_csv("a,100,hello,1,2,3,4\nb,200,\"quoted, text\",0,0,0,0\n");
    EXPECT_EQ(from_json.records, from_csv.records);
}

TEST(Corpus, JsonlMissingFieldIsParseError)
{
    std::istringstream jl("{\"id\":\"a\",\"timestamp\":100,\"text\":\"x\",\"followers\":1,\"comments\":2,\"likes\":3}\n");
    EXPECT_THROW(read_tweets(jl, CorpusFormat::Jsonl), ParseError);
}

TEST(Corpus, WriteReadRoundTripBothFormats)
{
    std::vector<TweetRecord> recs = {
        {"x1", 10, "line one\nline two, \"quoted\"", 1, 2, 3, 4},
        {"x2", 20, "plain", 0, 0, 0, 9},
    };
    for (auto fmt : {CorpusFormat::Csv, CorpusFormat::Jsonl}) {
        std::ostringstream out;
        write_tweets(out, recs, fmt);
        std::istringstream in(out.str());
        EXPECT_EQ(read_tweets(in, fmt).records, recs);
    }
}

TEST(Corpus, IngestIsIdempotent)
{
    testsupport::TempDir dir("corpus");
    testsupport::spit(dir / "t.csv", std::string(kHeader) + "a,1,x,0,0,0,0\nb,2,y,1,1,1,1\n");
    auto first = load_tweets(dir / "t.csv", CorpusFormat::Csv);
    auto second = load_tweets(dir / "t.csv", CorpusFormat::Csv);
    EXPECT_EQ(first.records, second.records);
}

TEST(Prices, TwoRowsLoad)
{
    std::istringstream in("date,price\n2020-01-01,100.00\n2020-01-02,110.00\n");
    auto s = read_prices(in);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_DOUBLE_EQ(s[1].price, 110.0);
}

TEST(Prices, GapNamesMissingDay)
{
    std::istringstream in("date,price\n2020-01-01,100.00\n2020-01-03,120.00\n");
    try {
        read_prices(in);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("2020-01-02"), std::string::npos);
    }
}

TEST(Prices, UnorderedNonPositiveAndCapRejected)
{
    std::istringstream unordered("date,price\n2020-01-02,100\n2020-01-01,100\n");
    EXPECT_THROW(read_prices(unordered), ValidationError);
    std::istringstream zero("date,price\n2020-01-01,0\n");
    EXPECT_THROW(read_prices(zero), ValidationError);
    std::istringstream big("date,price\n2020-01-01,100000\n");
    EXPECT_THROW(read_prices(big), ValidationError);
    std::istringstream bad("date,price\n2020-13-01,5\n");
    EXPECT_THROW(read_prices(bad), ParseError);
}

TEST(Prices, RoundHalfUpOnIngest)
{
    std::istringstream in("date,price\n2020-01-01,99.999\n2020-01-02,1.005\n2020-01-03,2.004\n");
    auto s = read_prices(in);
    EXPECT_DOUBLE_EQ(s[0].price, 100.00);
    EXPECT_DOUBLE_EQ(s[1].price, 1.01);
    EXPECT_DOUBLE_EQ(s[2].price, 2.00);
}

TEST(Prices, ParsePriceExactDecimal)
{
    EXPECT_DOUBLE_EQ(parse_price("0.125"), 0.13);
    EXPECT_DOUBLE_EQ(parse_price("10"), 10.0);
    EXPECT_THROW(parse_price("1e3"), std::invalid_argument);
    EXPECT_THROW(parse_price(""), std::invalid_argument);
}

TEST(Prices, SaveLoadRoundTrip)
{
    testsupport::TempDir dir("prices");
    auto s = testsupport::series_from("2021-03-01", {1.5, 2.25, 1000.99});
    save_prices(dir / "p.csv", s);
    EXPECT_EQ(testsupport::slurp(dir / "p.csv"), "date,price\n2021-03-01,1.50\n2021-03-02,2.25\n2021-03-03,1000.99\n");
    EXPECT_EQ(load_prices(dir / "p.csv"), s);
}

TEST(Bucketing, EmptyTweetsGiveEmptyBuckets)
{
    auto s = testsupport::series_from("2020-01-01", {1, 2, 3});
    auto b = bucket_by_day(std::span<const TweetRecord>{}, s);
    ASSERT_EQ(b.buckets.size(), 3u);
    for (const auto& day : b.buckets)
        EXPECT_TRUE(day.tweets.empty());
}

TEST(Bucketing, MidnightBoundary)
{
    auto s = testsupport::series_from("2020-01-01", {1, 2});
    const std::int64_t midnight = day_start(parse_date("2020-01-02"));
    std::vector<TweetRecord> t = {
        {"a", midnight - 1, "x", 0, 0, 0, 0},
        {"b", midnight + 1, "x", 0, 0, 0, 0},
        {"c", midnight - 100, "x", 0, 0, 0, 0},
    };
    auto b = bucket_by_day(t, s);
    ASSERT_EQ(b.buckets[0].tweets.size(), 2u);
    EXPECT_EQ(b.buckets[0].tweets[0].id, "a");
    EXPECT_EQ(b.buckets[0].tweets[1].id, "c");
    ASSERT_EQ(b.buckets[1].tweets.size(), 1u);
    EXPECT_EQ(b.buckets[1].tweets[0].id, "b");
}

TEST(Bucketing, PartitionProperty)
{
    std::mt19937_64 rng(7);
    auto s = testsupport::series_from("2020-01-01", std::vector<double>(10, 5.0));
    const std::int64_t lo = day_start(s.first_day()) - 3 * kSecondsPerDay;
    const std::int64_t hi = day_start(s.last_day()) + 4 * kSecondsPerDay;
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::int64_t> ts(lo, hi);
        std::vector<TweetRecord> tweets;
        const int n = static_cast<int>(rng() % 200);
        for (int i = 0; i < n; ++i)
            tweets.push_back({"t" + std::to_string(i), ts(rng), "x", 0, 0, 0, 0});
        auto b = bucket_by_day(tweets, s);
        std::size_t total = b.dropped;
        for (const auto& day : b.buckets) {
            total += day.tweets.size();
            for (const auto& t : day.tweets)
                EXPECT_EQ(day_of(t.timestamp), day.date);
        }
        EXPECT_EQ(total, tweets.size());
    }
}

TEST(Dates, EpochArithmetic)
{
    EXPECT_EQ(format_date(day_of(0)), "1970-01-01");
    EXPECT_EQ(format_date(day_of(-1)), "1969-12-31");
    EXPECT_EQ(day_start(parse_date("2014-04-01")), 1396310400);
    EXPECT_THROW(parse_date("2014-4-1"), std::invalid_argument);
}
