#pragma once

// Shared helpers for the unit and acceptance tests: hand-rolled random
// generators, straight-from-formula metric oracles and temp-dir handling.

#include "tweetq/corpus.hpp"
#include "tweetq/date.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testsupport {

inline std::filesystem::path repo_dir()
{
    return std::filesystem::path(TWEETQ_REPO_DIR);
}

inline std::filesystem::path data_dir()
{
    return repo_dir() / "tests" / "data";
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("tweetq_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::error_code ec; std::filesystem::remove_all(path_, ec); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// 64-bit FNV-1a over the file's bytes.
inline std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Random text biased toward the characters the cleaner rewrites.
inline std::string random_tweet_text(std::mt19937_64& rng)
{
    static const std::vector<std::string> pieces = {
        "a", "b", "z", "A", "Q", "Z", "0", "9", "_", " ", " ", "  ", "\t", "\n", ".", "..", "...", "#", "##",
        "@", "@bob", "@A_1", "rt", "RT", "rt ", "RT @x ", "http://", "https://", "http://t.co/x", "www.",
        "www.a.com", "h", "t", "p", ":", "/", "!", "!!!!", "aaaa", "....", "é", "É", "Ω", "ж", "Ж", "🚀",
        "moooon", "\xC3", "\xA9", "w", "s",
    };
    std::uniform_int_distribution<int> len(0, 14);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i)
        s += pieces[pick(rng)];
    return s;
}

// Returns a description of the first forbidden pattern found, or "".
inline std::string forbidden_in(const std::string& s)
{
    for (char c : s) {
        if (c >= 'A' && c <= 'Z')
            return "uppercase";
        if (c == '#')
            return "hash";
        if (c == '@')
            return "at-sign";
    }
    for (const char* bad : {"http://", "https://", "  ", "\xC3\x89", "\xD0\x96", "\xCE\xA9"}) {
        if (s.find(bad) != std::string::npos)
            return std::string("substring ") + bad;
    }
    if (!s.empty() && (s.front() == ' ' || s.back() == ' '))
        return "untrimmed";
    for (std::size_t i = 0; i + 3 < s.size(); ++i) {
        if (s[i] == s[i + 1] && s[i] == s[i + 2] && s[i] == s[i + 3])
            return "run of 4";
    }
    return {};
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

// Metric oracles, written directly from the formulas with no shared code.
namespace oracle {

inline double mean(const std::vector<double>& x)
{
    long double s = 0;
    for (double v : x)
        s += v;
    return static_cast<double>(s / x.size());
}

inline double var(const std::vector<double>& x)
{
    const double m = mean(x);
    long double s = 0;
    for (double v : x)
        s += (v - m) * (v - m);
    return static_cast<double>(s / (x.size() - 1));
}

inline double vaf(const std::vector<double>& ap, const std::vector<double>& pp)
{
    std::vector<double> d(ap.size());
    for (std::size_t i = 0; i < ap.size(); ++i)
        d[i] = ap[i] - pp[i];
    return (1.0 - var(d) / var(ap)) * 100.0;
}

inline double r2(const std::vector<double>& ap, const std::vector<double>& pp)
{
    const double m = mean(ap);
    long double rss = 0, tss = 0;
    for (std::size_t i = 0; i < ap.size(); ++i) {
        rss += (ap[i] - pp[i]) * (ap[i] - pp[i]);
        tss += (ap[i] - m) * (ap[i] - m);
    }
    return static_cast<double>(1.0L - rss / tss);
}

inline double mape(const std::vector<double>& ap, const std::vector<double>& pp)
{
    long double s = 0;
    for (std::size_t i = 0; i < ap.size(); ++i)
        s += std::fabs(ap[i] - pp[i]) / std::fabs(ap[i]);
    return static_cast<double>(s / ap.size() * 100.0L);
}

inline double rmse(const std::vector<double>& ap, const std::vector<double>& pp)
{
    long double s = 0;
    for (std::size_t i = 0; i < ap.size(); ++i)
        s += (ap[i] - pp[i]) * (ap[i] - pp[i]);
    return static_cast<double>(std::sqrt(s / ap.size()));
}

inline double wmape(const std::vector<double>& ap, const std::vector<double>& pp)
{
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < ap.size(); ++i) {
        num += std::fabs(ap[i] - pp[i]);
        den += ap[i];
    }
    return static_cast<double>(num / den * 100.0L);
}

} // namespace oracle

inline bool rel_close(double a, double b, double rel)
{
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= rel * scale;
}

inline tweetq::PriceSeries series_from(const std::string& first_day, const std::vector<double>& prices)
{
    std::vector<tweetq::PricePoint> pts;
    tweetq::Date d = tweetq::parse_date(first_day);
    for (double p : prices) {
        pts.push_back({d, p});
        d += std::chrono::days{1};
    }
    return tweetq::PriceSeries::from_points(std::move(pts));
}

} // namespace testsupport
