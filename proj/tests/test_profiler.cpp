#include "tweetq/error.hpp"
#include "tweetq/profiler.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

using namespace tweetq;
using namespace std::chrono_literals;

namespace {

void busy_for(std::chrono::duration<double> d)
{
    const auto end = std::chrono::steady_clock::now() + d;
    volatile double sink = 0.0;
    while (std::chrono::steady_clock::now() < end) {
        for (int i = 0; i < 10000; ++i)
            sink = sink + std::sqrt(static_cast<double>(i));
    }
}

void expect_ordered(const ResourceReport& r)
{
    for (const ChannelStats* c : {&r.cpu, &r.ram, &r.mem}) {
        EXPECT_LE(c->min, c->avg);
        EXPECT_LE(c->avg, c->max);
    }
    for (const auto& s : r.samples) {
        EXPECT_TRUE(std::isfinite(s.cpu_pct) && s.cpu_pct >= 0.0);
        EXPECT_TRUE(std::isfinite(s.ram_pct) && s.ram_pct >= 0.0 && s.ram_pct <= 100.0);
        EXPECT_TRUE(std::isfinite(s.mem_pct) && s.mem_pct >= 0.0 && s.mem_pct <= 100.0);
    }
}

} // namespace

TEST(Profiler, RejectsNonPositiveInterval)
{
    EXPECT_THROW(Profiler(0.0), ArgumentError);
    EXPECT_THROW(Profiler(-1.0), ArgumentError);
}

TEST(Profiler, ImmediateStop)
{
    Profiler p(1.0);
    EXPECT_TRUE(p.active());
    auto r = p.stop();
    EXPECT_FALSE(p.active());
    EXPECT_LT(r.wall_seconds, 1.5);
    EXPECT_EQ(r.sample_count, r.samples.size());
    expect_ordered(r);
}

TEST(Profiler, DoubleStopIsError)
{
    Profiler p(0.5);
    p.stop();
    EXPECT_THROW(p.stop(), Error);
}

TEST(Profiler, FiveSecondsAtOneSecondAndLowOverhead)
{
    Profiler p(1.0);
    std::this_thread::sleep_for(5s);
    auto r = p.stop();
    EXPECT_GE(r.sample_count, 4u);
    EXPECT_LE(r.sample_count, 6u);
    EXPECT_GE(r.wall_seconds, static_cast<double>(r.sample_count) * r.interval * 0.5);
    EXPECT_LT(r.cpu.avg, 2.0);
    expect_ordered(r);
    double prev = 0.0;
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const double gap = r.samples[i].t - prev;
        EXPECT_GT(r.samples[i].t, prev);
        EXPECT_GE(gap, 0.5);
        EXPECT_LE(gap, 2.0);
        prev = r.samples[i].t;
    }
}

TEST(Profiler, BusyAndSleepingWorkloads)
{
    Profiler busy(0.5);
    busy_for(2s);
    auto rb = busy.stop();
    EXPECT_GT(rb.cpu.avg, 50.0);
    expect_ordered(rb);

    Profiler idle(0.5);
    std::this_thread::sleep_for(2s);
    auto ri = idle.stop();
    EXPECT_LT(ri.cpu.avg, 10.0);
    expect_ordered(ri);
}

TEST(Profiler, MovedFromHandleIsInactive)
{
    Profiler a(0.5);
    Profiler b = std::move(a);
    EXPECT_TRUE(b.active());
    EXPECT_FALSE(a.active()); // NOLINT(bugprone-use-after-move)
    b.stop();
}

TEST(ResourceReport, SummaryAndSerialization)
{
    std::vector<ResourceSample> s = {{0.5, 10, 40, 1}, {1.0, 30, 42, 2}, {1.5, 20, 41, 3}};
    auto r = summarize(s, 1.6, 0.5);
    EXPECT_DOUBLE_EQ(r.cpu.min, 10);
    EXPECT_DOUBLE_EQ(r.cpu.avg, 20);
    EXPECT_DOUBLE_EQ(r.cpu.max, 30);
    EXPECT_DOUBLE_EQ(r.mem.avg, 2);
    EXPECT_EQ(r.sample_count, 3u);

    auto j = nlohmann::json::parse(r.to_json());
    EXPECT_DOUBLE_EQ(j["ram_pct"]["max"].get<double>(), 42.0);
    EXPECT_EQ(j["sample_count"].get<int>(), 3);

    std::istringstream csv(r.to_csv());
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,cpu_pct,ram_pct,mem_pct");
    int rows = 0;
    while (std::getline(csv, line))
        ++rows;
    EXPECT_EQ(rows, 3);

    auto empty = summarize({}, 0.1, 1.0);
    EXPECT_EQ(empty.sample_count, 0u);
    EXPECT_EQ(empty.cpu.avg, 0.0);
}
