#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

namespace tweetq {

/// Sum of squared deviations over (n - 1). Throws ArgumentError for n < 2.
double sample_variance(std::span<const double> x);

// Each metric takes actual prices `ap` and predictions `pp` of equal length
// and throws ArgumentError (naming the metric) when its formula is undefined.

/// Variance accounted for, percent.
double vaf(std::span<const double> ap, std::span<const double> pp);
/// 1 - RSS / TSS.
double r2(std::span<const double> ap, std::span<const double> pp);
/// Mean absolute percentage error, percent.
double mape(std::span<const double> ap, std::span<const double> pp);
/// Nash-Sutcliffe efficiency; same formula as r2.
double nse(std::span<const double> ap, std::span<const double> pp);
double rmse(std::span<const double> ap, std::span<const double> pp);
/// Weighted MAPE, percent.
double wmape(std::span<const double> ap, std::span<const double> pp);

struct EvalReport {
    double vaf = 0.0;
    double r2 = 0.0;
    double mape = 0.0;
    double nse = 0.0;
    double rmse = 0.0;
    double wmape = 0.0;
    std::size_t n = 0;

    std::string to_json() const;
    /// Aligned-column table, one header row and one value row.
    std::string to_table(const std::string& label = "model") const;
};

EvalReport evaluate(std::span<const double> ap, std::span<const double> pp);

} // namespace tweetq
