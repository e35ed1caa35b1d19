#include "tweetq/metrics.hpp"

#include "tweetq/error.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace tweetq {

namespace {

void require_pair(const char* metric, std::span<const double> ap, std::span<const double> pp, std::size_t min_n)
{
    if (ap.size() != pp.size())
        throw ArgumentError(std::string(metric) + ": length mismatch (" + std::to_string(ap.size()) + " vs " +
                            std::to_string(pp.size()) + ")");
    if (ap.size() < min_n)
        throw ArgumentError(std::string(metric) + ": needs at least " + std::to_string(min_n) + " samples");
}

double mean(std::span<const double> x)
{
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double residual_sum_squares(std::span<const double> ap, std::span<const double> pp)
{
    double rss = 0.0;
    for (std::size_t t = 0; t < ap.size(); ++t)
        rss += (ap[t] - pp[t]) * (ap[t] - pp[t]);
    return rss;
}

double total_sum_squares(std::span<const double> ap)
{
    const double m = mean(ap);
    double tss = 0.0;
    for (double v : ap)
        tss += (v - m) * (v - m);
    return tss;
}

double efficiency(const char* metric, std::span<const double> ap, std::span<const double> pp)
{
    require_pair(metric, ap, pp, 2);
    const double tss = total_sum_squares(ap);
    if (!(tss > 0.0))
        throw ArgumentError(std::string(metric) + ": undefined for constant actual series (TSS = 0)");
    return 1.0 - residual_sum_squares(ap, pp) / tss;
}

} // namespace

double sample_variance(std::span<const double> x)
{
    if (x.size() < 2)
        throw ArgumentError("sample_variance: needs at least 2 samples");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x)
        ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double vaf(std::span<const double> ap, std::span<const double> pp)
{
    require_pair("vaf", ap, pp, 2);
    const double var_ap = sample_variance(ap);
    if (!(var_ap > 0.0))
        throw ArgumentError("vaf: undefined for constant actual series (var(AP) = 0)");
    std::vector<double> diff(ap.size());
    for (std::size_t t = 0; t < ap.size(); ++t)
        diff[t] = ap[t] - pp[t];
    return (1.0 - sample_variance(diff) / var_ap) * 100.0;
}

double r2(std::span<const double> ap, std::span<const double> pp)
{
    return efficiency("r2", ap, pp);
}

double nse(std::span<const double> ap, std::span<const double> pp)
{
    return efficiency("nse", ap, pp);
}

double mape(std::span<const double> ap, std::span<const double> pp)
{
    require_pair("mape", ap, pp, 1);
    double total = 0.0;
    for (std::size_t t = 0; t < ap.size(); ++t) {
        if (ap[t] == 0.0)
            throw ArgumentError("mape: undefined when an actual value is 0");
        total += std::abs((ap[t] - pp[t]) / ap[t]);
    }
    return total / static_cast<double>(ap.size()) * 100.0;
}

double rmse(std::span<const double> ap, std::span<const double> pp)
{
    require_pair("rmse", ap, pp, 1);
    return std::sqrt(residual_sum_squares(ap, pp) / static_cast<double>(ap.size()));
}

double wmape(std::span<const double> ap, std::span<const double> pp)
{
    require_pair("wmape", ap, pp, 1);
    double err = 0.0;
    double weight = 0.0;
    for (std::size_t t = 0; t < ap.size(); ++t) {
        err += std::abs(ap[t] - pp[t]);
        weight += ap[t];
    }
    if (weight == 0.0)
        throw ArgumentError("wmape: undefined when actual values sum to 0");
    return err / weight * 100.0;
}

EvalReport evaluate(std::span<const double> ap, std::span<const double> pp)
{
    EvalReport r;
    r.vaf = vaf(ap, pp);
    r.r2 = tweetq::r2(ap, pp);
    r.mape = tweetq::mape(ap, pp);
    r.nse = tweetq::nse(ap, pp);
    r.rmse = tweetq::rmse(ap, pp);
    r.wmape = tweetq::wmape(ap, pp);
    r.n = ap.size();
    return r;
}

std::string EvalReport::to_json() const
{
    nlohmann::ordered_json j;
    j["vaf"] = vaf;
    j["r2"] = r2;
    j["mape"] = mape;
    j["nse"] = nse;
    j["rmse"] = rmse;
    j["wmape"] = wmape;
    j["n"] = n;
    return j.dump(2);
}

std::string EvalReport::to_table(const std::string& label) const
{
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%-12s %10s %8s %10s %8s %12s %10s %6s\n", "", "VAF", "R2", "MAPE", "NSE",
                  "RMSE", "WMAPE", "n");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-12s %10.2f %8.2f %10.3f %8.2f %12.1f %10.1f %6zu\n", label.c_str(), vaf, r2,
                  mape, nse, rmse, wmape, n);
    out += buf;
    return out;
}

} // namespace tweetq
