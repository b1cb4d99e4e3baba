#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "adaptivetrend/indicators.h"
#include "fixtures.h"

namespace at = adaptivetrend;
using at::testing::make_series;

TEST(Momentum, RateOfChange) {
    const auto s = at::testing::closes_series("X", {100, 105, 110, 90});
    const auto m = at::momentum(s, 2);
    EXPECT_FALSE(m[0].defined);
    EXPECT_FALSE(m[1].defined);
    ASSERT_TRUE(m[2].defined);
    EXPECT_NEAR(m[2].value, 0.10, 1e-15);
    EXPECT_NEAR(m[3].value, 90.0 / 105.0 - 1.0, 1e-15);
    const auto down = at::momentum(at::testing::closes_series("Y", {80, 70, 60}), 2);
    EXPECT_NEAR(down[2].value, -0.25, 1e-15);
}

TEST(Momentum, ConstantSeriesAndLongLookback) {
    const auto s = at::testing::closes_series("X", std::vector<double>(10, 42.0));
    for (const auto& v : at::momentum(s, 3)) {
        if (v.defined) EXPECT_EQ(v.value, 0.0);
    }
    for (const auto& v : at::momentum(s, 10)) EXPECT_FALSE(v.defined);
}

TEST(Momentum, ScaleInvariant) {
    std::vector<at::testing::Ohlc> rows = at::testing::scripted20();
    std::vector<at::testing::Ohlc> scaled;
    for (auto r : rows) scaled.push_back({r.open * 3.7, r.high * 3.7, r.low * 3.7, r.close * 3.7});
    const auto a = at::momentum(make_series("X", rows), 4);
    const auto b = at::momentum(make_series("X", scaled), 4);
    for (std::size_t i = 4; i < a.size(); ++i) EXPECT_NEAR(a[i].value, b[i].value, 1e-12 * std::fabs(a[i].value) + 1e-15);
}

TEST(TrueRange, ThreeTermMax) {
    const auto s = make_series("X", {{9, 9.5, 8.5, 9}, {10, 12, 8, 11}});
    EXPECT_DOUBLE_EQ(at::true_range(s)[1].value, 4.0);
    const auto s2 = make_series("X", {{10, 10.5, 9.5, 10}, {10, 11, 9, 10.5}});
    EXPECT_DOUBLE_EQ(at::true_range(s2)[1].value, 2.0);
    const auto gap = make_series("X", {{10, 10.5, 9.5, 10}, {19, 20, 18, 19.5}});
    EXPECT_DOUBLE_EQ(at::true_range(gap)[1].value, 10.0);
    EXPECT_DOUBLE_EQ(at::true_range(gap)[0].value, 1.0);
}

TEST(Atr, SimpleAverage) {
    const auto s = make_series("X", {{10, 12, 8, 10}, {10, 11, 9, 10}});
    const auto a = at::atr(s, 2);
    EXPECT_FALSE(a[0].defined);
    ASSERT_TRUE(a[1].defined);
    EXPECT_DOUBLE_EQ(a[1].value, 3.0);
    const auto tr = at::true_range(s);
    const auto one = at::atr(s, 1);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(one[i].value, tr[i].value);
}

TEST(Atr, FlatBarsGiveZero) {
    const auto s = make_series("X", {{5, 5, 5, 5}, {5, 5, 5, 5}, {5, 5, 5, 5}});
    EXPECT_EQ(at::atr(s, 3)[2].value, 0.0);
}

TEST(Atr, HomogeneousInPrice) {
    std::vector<at::testing::Ohlc> scaled;
    for (auto r : at::testing::scripted20()) scaled.push_back({r.open * 2, r.high * 2, r.low * 2, r.close * 2});
    const auto a = at::atr(make_series("X", at::testing::scripted20()), 3);
    const auto b = at::atr(make_series("X", scaled), 3);
    for (std::size_t i = 2; i < a.size(); ++i) EXPECT_NEAR(b[i].value, 2 * a[i].value, 1e-12 * a[i].value);
}

TEST(RollingSharpe, Definitions) {
    const std::vector<double> alt{0.01, -0.01, 0.01, -0.01};
    EXPECT_NEAR(*at::rolling_sharpe(alt, 0.0, 1460), 0.0, 1e-12);
    const std::vector<double> flat(5, 0.002);
    EXPECT_FALSE(at::rolling_sharpe(flat, 0.045, 1460).has_value());
    EXPECT_FALSE(at::rolling_sharpe(std::vector<double>{0.01}, 0.045, 1460).has_value());
    const std::vector<double> r{0.01, 0.02, -0.005, 0.03};
    EXPECT_NEAR(*at::rolling_sharpe(r, 0.045, 1460), 35.11019578644994, 1e-9);
}

TEST(RollingSharpe, ZeroExcessReturnGivesZero) {
    const double rf_bar = 0.045 / 1460.0;
    const std::vector<double> r{rf_bar + 0.01, rf_bar - 0.01, rf_bar + 0.02, rf_bar - 0.02};
    EXPECT_NEAR(*at::rolling_sharpe(r, 0.045, 1460), 0.0, 1e-9);
}
