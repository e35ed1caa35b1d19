#include "support.hpp"

#include "tweetq/error.hpp"
#include "tweetq/metrics.hpp"

#include <gtest/gtest.h>

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace tweetq;
using V = std::vector<double>;

TEST(Variance, Examples)
{
    EXPECT_NEAR(sample_variance(V{1, 2, 3, 4}), 5.0 / 3.0, 1e-15);
    EXPECT_EQ(sample_variance(V{7, 7, 7}), 0.0);
    EXPECT_THROW(sample_variance(V{1}), ArgumentError);
}

TEST(Metrics, SpecExamples)
{
    EXPECT_NEAR(vaf(V{1, 2, 3, 4}, V{1, 2, 3, 8}), -140.0, 1e-9);
    EXPECT_NEAR(vaf(V{1, 2, 3, 4}, V{11, 12, 13, 14}), 100.0, 1e-12);
    EXPECT_NEAR(r2(V{1, 2, 3}, V{3, 2, 1}), -3.0, 1e-12);
    EXPECT_NEAR(nse(V{1, 2, 3}, V{3, 2, 1}), -3.0, 1e-12);
    EXPECT_NEAR(r2(V{1, 2, 3}, V{2, 2, 2}), 0.0, 1e-12);
    EXPECT_NEAR(mape(V{100, 200}, V{90, 220}), 10.0, 1e-12);
    EXPECT_NEAR(mape(V{50}, V{100}), 100.0, 1e-12);
    EXPECT_NEAR(rmse(V{0, 0}, V{3, 4}), std::sqrt(12.5), 1e-12);
    EXPECT_NEAR(rmse(V{1}, V{4}), 3.0, 1e-12);
    EXPECT_NEAR(wmape(V{100, 100}, V{90, 110}), 10.0, 1e-12);
    EXPECT_NEAR(wmape(V{10, 90}, V{0, 90}), 10.0, 1e-12);
}

TEST(Metrics, ErrorsNameTheMetric)
{
    auto message_of = [](auto fn) -> std::string {
        try {
            fn();
        } catch (const ArgumentError& e) {
            return e.what();
        }
        return "";
    };
    EXPECT_NE(message_of([] { vaf(V{2, 2, 2}, V{1, 2, 3}); }).find("vaf"), std::string::npos);
    EXPECT_NE(message_of([] { r2(V{2, 2}, V{1, 2}); }).find("r2"), std::string::npos);
    EXPECT_NE(message_of([] { nse(V{2, 2}, V{1, 2}); }).find("nse"), std::string::npos);
    EXPECT_NE(message_of([] { mape(V{0, 1}, V{1, 1}); }).find("mape"), std::string::npos);
    EXPECT_NE(message_of([] { rmse(V{}, V{}); }).find("rmse"), std::string::npos);
    EXPECT_NE(message_of([] { wmape(V{1, -1}, V{1, 1}); }).find("wmape"), std::string::npos);
    EXPECT_NE(message_of([] { vaf(V{1, 2, 3}, V{1, 2}); }).find("vaf"), std::string::npos);
    EXPECT_NE(message_of([] { evaluate(V{1, 0, 3}, V{1, 1, 1}); }).find("mape"), std::string::npos);
}

TEST(Metrics, PerfectFitIdentities)
{
    const V ap = {10, 12.5, 9, 30, 11};
    auto rep = evaluate(ap, ap);
    EXPECT_EQ(rep.vaf, 100.0);
    EXPECT_EQ(rep.r2, 1.0);
    EXPECT_EQ(rep.mape, 0.0);
    EXPECT_EQ(rep.nse, 1.0);
    EXPECT_EQ(rep.rmse, 0.0);
    EXPECT_EQ(rep.wmape, 0.0);
    EXPECT_EQ(rep.n, ap.size());
}

TEST(Metrics, AgreeWithOracleOnRandomPairs)
{
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> len(2, 60);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = len(rng);
        V ap = testsupport::random_series(rng, n, 1.0, 5000.0);
        V pp(n);
        const double scale = std::exp(noise(rng) * 2.0);
        for (std::size_t i = 0; i < n; ++i)
            pp[i] = ap[i] + noise(rng) * scale * 50.0;
        namespace o = testsupport::oracle;
        ASSERT_TRUE(testsupport::rel_close(vaf(ap, pp), o::vaf(ap, pp), 1e-9));
        ASSERT_TRUE(testsupport::rel_close(r2(ap, pp), o::r2(ap, pp), 1e-9));
        ASSERT_TRUE(testsupport::rel_close(nse(ap, pp), o::r2(ap, pp), 1e-9));
        ASSERT_TRUE(testsupport::rel_close(mape(ap, pp), o::mape(ap, pp), 1e-9));
        ASSERT_TRUE(testsupport::rel_close(rmse(ap, pp), o::rmse(ap, pp), 1e-9));
        ASSERT_TRUE(testsupport::rel_close(wmape(ap, pp), o::wmape(ap, pp), 1e-9));
        ASSERT_EQ(r2(ap, pp), nse(ap, pp));

        auto rep = evaluate(ap, pp);
        ASSERT_EQ(rep.vaf, vaf(ap, pp));
        ASSERT_EQ(rep.mape, mape(ap, pp));
        ASSERT_EQ(rep.rmse, rmse(ap, pp));
        ASSERT_EQ(rep.n, n);
    }
}

TEST(Metrics, InvarianceProperties)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        V ap = testsupport::random_series(rng, n, 1.0, 1000.0);
        V pp = testsupport::random_series(rng, n, 1.0, 1000.0);
        const double c = testsupport::random_series(rng, 1, -500.0, 500.0)[0];
        V pp_shift = pp, ap_shift = ap;
        for (std::size_t i = 0; i < n; ++i) {
            pp_shift[i] += c;
            ap_shift[i] += c;
        }
        EXPECT_TRUE(testsupport::rel_close(vaf(ap, pp_shift), vaf(ap, pp), 1e-9));
        EXPECT_TRUE(testsupport::rel_close(rmse(ap_shift, pp_shift), rmse(ap, pp), 1e-9));
        long double rss = 0;
        for (std::size_t i = 0; i < n; ++i)
            rss += (ap[i] - pp[i]) * (ap[i] - pp[i]);
        const double r = rmse(ap, pp);
        EXPECT_TRUE(testsupport::rel_close(r * r * static_cast<double>(n), static_cast<double>(rss), 1e-9));

        V flat(n, ap[0]);
        EXPECT_LE(wmape(flat, pp), mape(flat, pp) + 1e-9);
    }
}

TEST(Metrics, ReportedRawWithoutClamping)
{
    const V ap = {1, 2, 3, 4, 5};
    const V pp = {5, 1, 4, 2, 3};
    EXPECT_LT(r2(ap, pp), 0.0);
    EXPECT_LT(vaf(ap, pp), 0.0);
}

TEST(EvalReport, JsonAndTable)
{
    auto rep = evaluate(V{100, 200}, V{90, 220});
    auto j = nlohmann::json::parse(rep.to_json());
    EXPECT_DOUBLE_EQ(j.at("mape").get<double>(), 10.0);
    EXPECT_EQ(j.at("n").get<std::size_t>(), 2u);
    for (const char* k : {"vaf", "r2", "mape", "nse", "rmse", "wmape"})
        EXPECT_TRUE(j.contains(k)) << k;
    const std::string table = rep.to_table("proposed");
    EXPECT_NE(table.find("proposed"), std::string::npos);
    EXPECT_NE(table.find("WMAPE"), std::string::npos);
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
}
