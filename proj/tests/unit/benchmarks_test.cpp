#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "adaptivetrend/benchmarks.h"
#include "fixtures.h"

namespace at = adaptivetrend;
using at::BenchmarkKind;
using at::testing::kT0;

namespace {

constexpr std::int64_t kDay = at::kSecondsPerDay;
constexpr int kDays = 200;

/// Daily series from a return generator; caps rank symbols in insertion order.
at::Universe daily_universe(const std::vector<std::pair<std::string, std::vector<double>>>& closes) {
    at::Universe u;
    double cap = 1e9;
    for (const auto& [sym, c] : closes) {
        u.series.emplace(sym, at::testing::closes_series(sym, c, 0.0, kT0, kDay));
        for (std::size_t i = 0; i < c.size(); ++i) u.caps.push_back({sym, at::date_of(kT0 + static_cast<at::Timestamp>(i) * kDay), cap});
        cap /= 2;
    }
    return u;
}

std::vector<double> path(double p0, const std::function<double(int)>& ret) {
    std::vector<double> c{p0};
    for (int i = 1; i < kDays; ++i) c.push_back(c.back() * (1.0 + ret(i)));
    return c;
}

at::BacktestConfig config() {
    at::BacktestConfig c;
    c.start = kT0 + 90 * kDay;   // 2021-04-01
    c.end = kT0 + 151 * kDay;    // 2021-06-01
    c.interval = kDay;
    c.initial_balance = 10'000;
    c.costs = at::CostConfig::zero();
    return c;
}

at::BenchmarkSpec spec(BenchmarkKind k, int n = 20) {
    at::BenchmarkSpec s;
    s.kind = k;
    s.universe_size = n;
    return s;
}

}  // namespace

TEST(BenchmarkSpec, LabelsAndParsing) {
    const auto d = at::default_benchmarks();
    ASSERT_EQ(d.size(), 5u);
    std::vector<std::string> labels;
    for (const auto& s : d) labels.push_back(s.label());
    EXPECT_EQ(labels, (std::vector<std::string>{"TSMOM-1M", "TSMOM-3M", "BTC-BH", "EW-BH", "VolScaled-TSMOM-1M"}));
    for (auto k : {BenchmarkKind::Tsmom, BenchmarkKind::VolScaledTsmom, BenchmarkKind::BuyHold,
                   BenchmarkKind::EqualWeightBuyHold}) {
        EXPECT_EQ(at::parse_benchmark_kind(at::to_string(k)), k);
    }
    EXPECT_THROW(at::parse_benchmark_kind("x"), std::invalid_argument);
    auto bad = spec(BenchmarkKind::Tsmom);
    bad.lookback_months = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(BuyHold, PriceDoublingDoublesEquity) {
    const auto cfg = config();
    // Linear in time: 100 at the fill bar, 200 at the final bar.
    const auto fill = (cfg.start - cfg.interval - kT0) / kDay;
    const auto last = (cfg.end - cfg.interval - kT0) / kDay;
    std::vector<double> c;
    for (int i = 0; i < kDays; ++i) {
        const auto step = static_cast<double>(std::max<std::int64_t>(i - fill, 0));
        c.push_back(100.0 + 100.0 * step / static_cast<double>(last - fill));
    }
    const auto u = daily_universe({{"BTC", c}});
    const auto r = at::run_benchmark(spec(BenchmarkKind::BuyHold), u, cfg);
    EXPECT_EQ(r.label, "BTC-BH");
    ASSERT_EQ(r.months.size(), 1u);
    EXPECT_EQ(r.months[0].rebalance_time, cfg.start - cfg.interval);
    EXPECT_EQ(r.equity.front().timestamp, cfg.start - cfg.interval);
    EXPECT_EQ(r.equity.back().timestamp, cfg.end - cfg.interval);
    EXPECT_NEAR(r.equity.back().balance, 20'000, 1e-8);
}

TEST(BuyHold, FeesChargedOnBothFills) {
    auto cfg = config();
    cfg.costs = at::CostConfig{};
    cfg.costs.slip_coeff = 0;
    cfg.costs.funding_rate_per_8h = 0;
    const auto c = path(100, [](int i) { return i % 2 ? 0.01 : -0.005; });
    const auto u = daily_universe({{"BTC", c}});
    const auto r = at::run_benchmark(spec(BenchmarkKind::BuyHold), u, cfg);
    const double p0 = c[89];
    const double p1 = c[150];
    const double entry = 10'000.0;
    const double exit = (entry / p0) * p1;
    EXPECT_NEAR(r.fee_total, 4e-4 * (entry + exit), 1e-9);
    EXPECT_NEAR(r.equity.back().balance, entry + (exit - entry) - r.fee_total, 1e-8);
}

TEST(Tsmom, AllRisingGoesLongEqually) {
    const auto up = path(10, [](int) { return 0.002; });
    const auto u = daily_universe({{"BTC", up}, {"ETH", up}, {"SOL", up}, {"ADA", up}});
    const auto w = at::benchmark_weights(spec(BenchmarkKind::Tsmom), u, kT0 + 89 * kDay);
    ASSERT_EQ(w.size(), 4u);
    for (const auto& [sym, x] : w) EXPECT_DOUBLE_EQ(x, 0.25);
    const auto r = at::run_benchmark(spec(BenchmarkKind::Tsmom), u, config());
    ASSERT_EQ(r.months.size(), 2u);
    for (const auto& m : r.months) EXPECT_NEAR(m.gross_exposure(), 1.0, 1e-12);
    EXPECT_GT(r.equity.back().balance, r.equity.front().balance);
}

TEST(Tsmom, FallingGoesShortAndLookbackUsesMonthStart) {
    // Rises until mid-March, falls afterwards. Over March alone it is down.
    const auto c = path(100, [](int i) { return i < 73 ? 0.01 : -0.01; });
    const auto u = daily_universe({{"BTC", c}, {"ETH", path(5, [](int) { return 0.001; })}});
    const auto ts = kT0 + 89 * kDay;
    const auto one = at::benchmark_weights(spec(BenchmarkKind::Tsmom), u, ts);
    EXPECT_DOUBLE_EQ(one.at("BTC"), -0.5);
    EXPECT_DOUBLE_EQ(one.at("ETH"), 0.5);
    auto three = spec(BenchmarkKind::Tsmom);
    three.lookback_months = 3;
    // 3 months back is the close before Jan 1, which the data does not have.
    EXPECT_TRUE(at::benchmark_weights(three, u, ts).empty());
    // At the end of April the reference is the close of Jan 31.
    const auto later = at::benchmark_weights(three, u, kT0 + 119 * kDay);
    const double ret = c[119] / c[30] - 1.0;
    EXPECT_DOUBLE_EQ(later.at("BTC"), ret > 0 ? 0.5 : -0.5);
}

TEST(VolScaled, TwentyPercentVolGivesHalfWeight) {
    // Alternating daily returns with sample sd = 0.2 / sqrt(365) over any 60 days.
    const double h = 0.2 / std::sqrt(365.0) * std::sqrt(59.0 / 60.0);
    const auto c = path(100, [h](int i) { return 0.01 + (i % 2 ? h : -h); });
    const auto u = daily_universe({{"BTC", c}, {"ETH", c}});
    auto s = spec(BenchmarkKind::VolScaledTsmom);
    const auto w = at::benchmark_weights(s, u, kT0 + 89 * kDay);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_NEAR(w.at("BTC"), 0.5 / 2.0, 1e-12);
    EXPECT_NEAR(w.at("ETH"), 0.5 / 2.0, 1e-12);
}

TEST(VolScaled, LowVolIsCappedAtMultiple) {
    const double h = 0.001;
    const auto c = path(100, [h](int i) { return 0.002 + (i % 2 ? h : -h); });
    const auto u = daily_universe({{"BTC", c}});
    const auto w = at::benchmark_weights(spec(BenchmarkKind::VolScaledTsmom), u, kT0 + 89 * kDay);
    EXPECT_DOUBLE_EQ(w.at("BTC"), 4.0);
}

TEST(EqualWeight, IndependentOfInputOrder) {
    const auto u = daily_universe({{"BTC", path(100, [](int) { return 0.0; })},
                                   {"ETH", path(10, [](int) { return 0.01; })},
                                   {"SOL", path(1, [](int) { return -0.01; })}});
    auto shuffled = u;
    std::reverse(shuffled.caps.begin(), shuffled.caps.end());
    const auto ts = kT0 + 89 * kDay;
    const auto a = at::benchmark_weights(spec(BenchmarkKind::EqualWeightBuyHold), u, ts);
    const auto b = at::benchmark_weights(spec(BenchmarkKind::EqualWeightBuyHold), shuffled, ts);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 3u);
    for (const auto& [sym, x] : a) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
    const auto top2 = at::benchmark_weights(spec(BenchmarkKind::EqualWeightBuyHold, 2), u, ts);
    EXPECT_EQ(top2.size(), 2u);
    EXPECT_FALSE(top2.contains("SOL"));
}

TEST(EqualWeight, RebalancesMonthly) {
    const auto u = daily_universe({{"BTC", path(100, [](int) { return 0.01; })},
                                   {"ETH", path(10, [](int) { return -0.005; })}});
    const auto r = at::run_benchmark(spec(BenchmarkKind::EqualWeightBuyHold), u, config());
    ASSERT_EQ(r.months.size(), 2u);
    EXPECT_EQ(r.months[1].rebalance_time, kT0 + 119 * kDay);
    EXPECT_GT(r.metrics.turnover, 0.0);
}

TEST(RunBenchmark, InsufficientHistory) {
    const auto u = daily_universe({{"BTC", std::vector<double>(100, 1.0)}});
    EXPECT_THROW(at::run_benchmark(spec(BenchmarkKind::BuyHold), u, config()), at::InsufficientHistory);
}
