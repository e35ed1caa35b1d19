#include "tweetq/profiler.hpp"

#include "tweetq/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace tweetq {

namespace {

using Clock = std::chrono::steady_clock;

struct MemInfo {
    double total_kb = 0.0;
    double available_kb = 0.0;
};

bool read_meminfo(MemInfo& out)
{
    std::ifstream in("/proc/meminfo");
    if (!in)
        return false;
    std::string key;
    double value = 0.0;
    std::string unit;
    bool have_total = false, have_avail = false;
    while (in >> key >> value) {
        std::getline(in, unit);
        if (key == "MemTotal:") {
            out.total_kb = value;
            have_total = true;
        } else if (key == "MemAvailable:") {
            out.available_kb = value;
            have_avail = true;
        }
        if (have_total && have_avail)
            break;
    }
    return have_total && have_avail && out.total_kb > 0.0;
}

bool read_rss_bytes(double& out)
{
    std::ifstream in("/proc/self/statm");
    long long size_pages = 0, resident_pages = 0;
    if (!(in >> size_pages >> resident_pages))
        return false;
    const long page = ::sysconf(_SC_PAGESIZE);
    if (page <= 0)
        return false;
    out = static_cast<double>(resident_pages) * static_cast<double>(page);
    return true;
}

bool process_cpu_seconds(double& out)
{
    timespec ts{};
    if (::clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts) != 0)
        return false;
    out = static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
    return true;
}

double clamp_pct(double v)
{
    if (!std::isfinite(v) || v < 0.0)
        return 0.0;
    return v;
}

ChannelStats stats_of(const std::vector<ResourceSample>& samples, double ResourceSample::*field)
{
    ChannelStats s;
    if (samples.empty())
        return s;
    s.min = s.max = samples.front().*field;
    double sum = 0.0;
    for (const auto& x : samples) {
        s.min = std::min(s.min, x.*field);
        s.max = std::max(s.max, x.*field);
        sum += x.*field;
    }
    // Summation rounding can push the mean a hair outside [min, max].
    s.avg = std::clamp(sum / static_cast<double>(samples.size()), s.min, s.max);
    return s;
}

} // namespace

ResourceReport summarize(std::vector<ResourceSample> samples, double wall_seconds, double interval)
{
    ResourceReport r;
    r.cpu = stats_of(samples, &ResourceSample::cpu_pct);
    r.ram = stats_of(samples, &ResourceSample::ram_pct);
    r.mem = stats_of(samples, &ResourceSample::mem_pct);
    r.sample_count = samples.size();
    r.wall_seconds = wall_seconds;
    r.interval = interval;
    r.samples = std::move(samples);
    return r;
}

std::string ResourceReport::to_json() const
{
    nlohmann::ordered_json j;
    auto channel = [](const ChannelStats& c) {
        nlohmann::ordered_json o;
        o["min"] = c.min;
        o["avg"] = c.avg;
        o["max"] = c.max;
        return o;
    };
    j["cpu_pct"] = channel(cpu);
    j["ram_pct"] = channel(ram);
    j["mem_pct"] = channel(mem);
    j["sample_count"] = sample_count;
    j["wall_seconds"] = wall_seconds;
    j["interval"] = interval;
    return j.dump(2);
}

std::string ResourceReport::to_csv() const
{
    std::string out = "t,cpu_pct,ram_pct,mem_pct\n";
    char buf[160];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.6f,%.4f,%.4f,%.4f\n", s.t, s.cpu_pct, s.ram_pct, s.mem_pct);
        out += buf;
    }
    return out;
}

struct Profiler::Impl {
    double interval = 1.0;
    Clock::time_point t0;
    Clock::time_point last_sample_at;
    double last_cpu = 0.0;
    std::vector<ResourceSample> samples;
    std::mutex mu;
    std::condition_variable cv;
    bool stop_requested = false;
    bool stopped = false;
    std::thread worker;

    ResourceSample take(Clock::time_point now)
    {
        ResourceSample s;
        s.t = std::chrono::duration<double>(now - t0).count();
        double cpu = last_cpu;
        process_cpu_seconds(cpu);
        const double dt = std::chrono::duration<double>(now - last_sample_at).count();
        s.cpu_pct = dt > 0.0 ? clamp_pct((cpu - last_cpu) / dt * 100.0) : 0.0;
        MemInfo mi;
        if (read_meminfo(mi)) {
            s.ram_pct = clamp_pct((mi.total_kb - mi.available_kb) / mi.total_kb * 100.0);
            double rss = 0.0;
            if (read_rss_bytes(rss))
                s.mem_pct = clamp_pct(rss / (mi.total_kb * 1024.0) * 100.0);
        }
        last_cpu = cpu;
        last_sample_at = now;
        return s;
    }

    void loop()
    {
        const auto step = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(interval));
        std::unique_lock lock(mu);
        for (long k = 1;; ++k) {
            const auto due = t0 + step * k;
            if (cv.wait_until(lock, due, [this] { return stop_requested; }))
                return;
            samples.push_back(take(Clock::now()));
        }
    }
};

Profiler::Profiler(double interval)
{
    if (!(interval > 0.0) || !std::isfinite(interval))
        throw ArgumentError("profiler interval must be a positive number of seconds");
    MemInfo mi;
    double rss = 0.0, cpu = 0.0;
    if (!read_meminfo(mi) || !read_rss_bytes(rss) || !process_cpu_seconds(cpu))
        throw UnsupportedPlatform("profiler needs /proc/meminfo, /proc/self/statm and a process CPU clock");
    impl_ = std::make_unique<Impl>();
    impl_->interval = interval;
    impl_->last_cpu = cpu;
    impl_->t0 = Clock::now();
    impl_->last_sample_at = impl_->t0;
    impl_->worker = std::thread([p = impl_.get()] { p->loop(); });
}

Profiler::~Profiler()
{
    if (impl_ && !impl_->stopped) {
        {
            std::lock_guard lock(impl_->mu);
            impl_->stop_requested = true;
        }
        impl_->cv.notify_all();
        impl_->worker.join();
    }
}

Profiler::Profiler(Profiler&&) noexcept = default;
Profiler& Profiler::operator=(Profiler&& other) noexcept
{
    if (this != &other) {
        Profiler dying(std::move(*this));
        impl_ = std::move(other.impl_);
    }
    return *this;
}

bool Profiler::active() const noexcept
{
    return impl_ && !impl_->stopped;
}

ResourceReport Profiler::stop()
{
    if (!impl_ || impl_->stopped)
        throw Error("profiler already stopped");
    {
        std::lock_guard lock(impl_->mu);
        impl_->stop_requested = true;
    }
    impl_->cv.notify_all();
    impl_->worker.join();
    impl_->stopped = true;

    const auto now = Clock::now();
    const double since_last = std::chrono::duration<double>(now - impl_->last_sample_at).count();
    if (since_last >= 0.5 * impl_->interval)
        impl_->samples.push_back(impl_->take(now));
    const double wall = std::chrono::duration<double>(now - impl_->t0).count();
    return summarize(std::move(impl_->samples), wall, impl_->interval);
}

} // namespace tweetq
