#include "tweetq/preprocess.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace tweetq {

namespace {

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_handle_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Lowercase for code points below U+0800: Latin-1, Latin Extended-A, Greek
// and Cyrillic capitals. Every mapping stays inside the same block, so byte
// lengths never change.
char32_t lower_code_point(char32_t cp)
{
    if (cp >= 'A' && cp <= 'Z')
        return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)
        return cp + 0x20;
    if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177))
        return cp % 2 == 0 ? cp + 1 : cp;
    if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E))
        return cp % 2 == 1 ? cp + 1 : cp;
    if (cp == 0x178)
        return 0xFF;
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2)
        return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F)
        return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F)
        return cp + 0x50;
    return cp;
}

void lowercase(std::string& s)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            s[i] = static_cast<char>(lower_code_point(b0));
            continue;
        }
        if ((b0 & 0xE0) != 0xC0 || i + 1 >= s.size())
            continue;
        const auto b1 = static_cast<unsigned char>(s[i + 1]);
        if ((b1 & 0xC0) != 0x80)
            continue;
        const char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | (b1 & 0x3F);
        if (cp < 0x80)
            continue; // overlong encoding, leave untouched
        const char32_t lower = lower_code_point(cp);
        s[i] = static_cast<char>(0xC0 | (lower >> 6));
        s[i + 1] = static_cast<char>(0x80 | (lower & 0x3F));
        ++i;
    }
}

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix)
{
    return s.substr(pos, prefix.size()) == prefix;
}

std::string drop_urls_and_rt(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const bool token_start = i == 0 || is_space(s[i - 1]);
        if (starts_with_at(s, i, "http://") || starts_with_at(s, i, "https://") ||
            (token_start && starts_with_at(s, i, "www."))) {
            while (i < s.size() && !is_space(s[i]))
                ++i;
            continue;
        }
        out.push_back(s[i++]);
    }

    // Leading retweet markers.
    std::size_t pos = 0;
    while (true) {
        while (pos < out.size() && is_space(out[pos]))
            ++pos;
        if (starts_with_at(out, pos, "rt") && (pos + 2 == out.size() || is_space(out[pos + 2])))
            pos += 2;
        else
            break;
    }
    out.erase(0, pos);
    return out;
}

std::string drop_mentions(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '@') {
            ++i;
            while (i < s.size() && is_handle_char(s[i]))
                ++i;
            continue;
        }
        out.push_back(s[i++]);
    }
    return out;
}

std::string strip_hashes(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    std::copy_if(s.begin(), s.end(), std::back_inserter(out), [](char c) { return c != '#'; });
    return out;
}

std::string replace_dot_runs(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '.') {
            std::size_t j = i;
            while (j < s.size() && s[j] == '.')
                ++j;
            if (j - i >= 2)
                out.push_back(' ');
            else
                out.push_back('.');
            i = j;
            continue;
        }
        out.push_back(s[i++]);
    }
    return out;
}

// Length in bytes of the UTF-8 sequence starting at s[i]; malformed bytes
// count as single units.
std::size_t unit_length(std::string_view s, std::size_t i)
{
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t n = 1;
    if ((b & 0xE0) == 0xC0)
        n = 2;
    else if ((b & 0xF0) == 0xE0)
        n = 3;
    else if ((b & 0xF8) == 0xF0)
        n = 4;
    if (i + n > s.size())
        return 1;
    for (std::size_t k = 1; k < n; ++k) {
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80)
            return 1;
    }
    return n;
}

std::string cap_runs(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    std::string_view prev;
    int run = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        const std::size_t n = unit_length(s, i);
        const std::string_view unit(s.data() + i, n);
        run = unit == prev ? run + 1 : 1;
        if (run <= 3)
            out.append(unit);
        prev = unit;
        i += n;
    }
    return out;
}

std::string collapse_and_trim(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty())
            out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string clean_once(std::string s)
{
    lowercase(s);
    s = drop_urls_and_rt(s);
    s = drop_mentions(s);
    s = strip_hashes(s);
    s = replace_dot_runs(s);
    s = cap_runs(s);
    return collapse_and_trim(s);
}

} // namespace

std::string clean(std::string_view text)
{
    std::string current(text);
    while (true) {
        std::string next = clean_once(current);
        if (next == current)
            return next;
        current = std::move(next);
    }
}

std::vector<CleanBucket> clean_buckets(const std::vector<DayBucket>& buckets)
{
    std::vector<CleanBucket> out;
    out.reserve(buckets.size());
    for (const auto& b : buckets) {
        CleanBucket cb{b.date, {}};
        cb.tweets.reserve(b.tweets.size());
        for (const auto& t : b.tweets) {
            std::string text = clean(t.text);
            if (!text.empty())
                cb.tweets.push_back({t, std::move(text)});
        }
        out.push_back(std::move(cb));
    }
    return out;
}

std::vector<CleanBucket> adopt_clean(const std::vector<DayBucket>& buckets)
{
    std::vector<CleanBucket> out;
    out.reserve(buckets.size());
    for (const auto& b : buckets) {
        CleanBucket cb{b.date, {}};
        cb.tweets.reserve(b.tweets.size());
        for (const auto& t : b.tweets)
            cb.tweets.push_back({t, t.text});
        out.push_back(std::move(cb));
    }
    return out;
}

std::vector<CleanBucket> dedup(std::vector<CleanBucket> buckets)
{
    for (auto& bucket : buckets) {
        auto& tweets = bucket.tweets;
        std::vector<std::size_t> order(tweets.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ta = tweets[a].original;
            const auto& tb = tweets[b].original;
            if (ta.timestamp != tb.timestamp)
                return ta.timestamp < tb.timestamp;
            if (ta.id != tb.id)
                return ta.id < tb.id;
            return a < b;
        });
        std::vector<char> keep(tweets.size(), 0);
        std::unordered_set<std::string_view> seen;
        seen.reserve(tweets.size());
        for (std::size_t idx : order) {
            if (seen.insert(tweets[idx].clean_text).second)
                keep[idx] = 1;
        }
        std::vector<CleanTweet> kept;
        kept.reserve(seen.size());
        for (std::size_t i = 0; i < tweets.size(); ++i) {
            if (keep[i])
                kept.push_back(std::move(tweets[i]));
        }
        tweets = std::move(kept);
    }
    return buckets;
}

std::vector<TweetRecord> to_records(const std::vector<CleanBucket>& buckets)
{
    std::vector<TweetRecord> out;
    for (const auto& b : buckets) {
        for (const auto& t : b.tweets) {
            TweetRecord r = t.original;
            r.text = t.clean_text;
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace tweetq
