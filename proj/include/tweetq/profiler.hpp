#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace tweetq {

/// One reading. cpu_pct is process CPU time over elapsed wall time since the
/// previous reading (can exceed 100 on several cores). ram_pct is system RAM
/// in use; mem_pct is this process's resident set, both as % of MemTotal.
struct ResourceSample {
    double t = 0.0; ///< seconds since start, monotonic clock
    double cpu_pct = 0.0;
    double ram_pct = 0.0;
    double mem_pct = 0.0;
};

struct ChannelStats {
    double min = 0.0;
    double avg = 0.0;
    double max = 0.0;
};

struct ResourceReport {
    ChannelStats cpu;
    ChannelStats ram;
    ChannelStats mem;
    std::size_t sample_count = 0;
    double wall_seconds = 0.0;
    double interval = 0.0;
    std::vector<ResourceSample> samples;

    std::string to_json() const;
    /// Header `t,cpu_pct,ram_pct,mem_pct`, one row per sample.
    std::string to_csv() const;
};

/// Summary over `samples`; all-zero channels when empty.
ResourceReport summarize(std::vector<ResourceSample> samples, double wall_seconds, double interval);

/// Background sampler. Samples at k * interval after construction and once
/// more on stop() if at least half an interval has passed since the last one.
class Profiler {
public:
    /// Throws ArgumentError for a non-positive interval and
    /// UnsupportedPlatform when /proc counters cannot be read.
    explicit Profiler(double interval = 1.0);
    ~Profiler();
    Profiler(Profiler&&) noexcept;
    Profiler& operator=(Profiler&&) noexcept;

    /// Halts the sampler and returns the summary. Throws Error on a second call.
    ResourceReport stop();
    bool active() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

inline Profiler start_profiler(double interval = 1.0) { return Profiler(interval); }

} // namespace tweetq
