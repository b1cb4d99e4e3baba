#include <gtest/gtest.h>

#include <algorithm>

#include "adaptivetrend/config.h"

namespace at = adaptivetrend;

namespace {

std::string value_of(const at::RunConfig& c, const std::string& key) {
    for (const auto& [k, v] : at::config_snapshot(c)) {
        if (k == key) return v;
    }
    return "<missing>";
}

}  // namespace

TEST(Config, SyntheticDefaultsResolveDates) {
    const auto c = at::parse_config("data.source = synthetic\n");
    EXPECT_EQ(c.backtest.start, at::parse_timestamp("2021-03-01"));
    EXPECT_EQ(c.backtest.end, at::parse_timestamp("2022-07-01"));
    EXPECT_EQ(c.synthetic.n_symbols, 20u);
    EXPECT_EQ(c.synthetic.seed, 42u);
    ASSERT_EQ(c.synthetic.regimes.size(), 1u);
    EXPECT_EQ(c.synthetic.regimes[0].bars, 2190u);
    EXPECT_EQ(c.backtest.rebalance.lambda, 0.7);
    EXPECT_EQ(c.backtest.rebalance.k_long, 15);
    EXPECT_EQ(c.backtest.rebalance.gamma_short, 1.7);
}

TEST(Config, ParsesValuesCommentsAndLists) {
    const auto c = at::parse_config(R"(
# comment
data.dir = /tmp/x   # trailing
data.interval = 4h
backtest.start = 2022-01-01
backtest.end = 2023-01-01
backtest.carry_positions = true
rebalance.lambda = 0.5
grid.alpha = 1, 2.5 ,3
grid.lookback = 6,12
cost.taker_fee_bps = 7.5
cost.funding_hours = 0,12
seed = 99
)");
    EXPECT_EQ(c.data_dir, "/tmp/x");
    EXPECT_EQ(c.backtest.interval, 4 * 3600);
    EXPECT_TRUE(c.backtest.carry_positions);
    EXPECT_EQ(c.backtest.rebalance.lambda, 0.5);
    EXPECT_EQ(c.backtest.rebalance.grid.alpha, (std::vector<double>{1, 2.5, 3}));
    EXPECT_EQ(c.backtest.rebalance.grid.lookback, (std::vector<int>{6, 12}));
    EXPECT_EQ(c.backtest.costs.taker_fee_bps, 7.5);
    EXPECT_EQ(c.backtest.costs.funding_hours, (std::vector<int>{0, 12}));
    EXPECT_EQ(c.seed, 99u);
    EXPECT_EQ(value_of(c, "rebalance.lambda"), "0.5");
    EXPECT_EQ(value_of(c, "data.interval"), "4h");
}

TEST(Config, CollectsEveryBadKey) {
    try {
        at::parse_config("data.source = synthetic\nfoo.bar = 1\nrebalance.lambda = abc\nnot a pair\n");
        FAIL() << "expected ConfigError";
    } catch (const at::ConfigError& e) {
        const auto& k = e.keys();
        EXPECT_EQ(k.size(), 3u);
        EXPECT_NE(std::find(k.begin(), k.end(), "foo.bar"), k.end());
        EXPECT_NE(std::find(k.begin(), k.end(), "rebalance.lambda"), k.end());
        EXPECT_NE(std::string(e.what()).find("foo.bar"), std::string::npos);
    }
}

TEST(Config, FileSourceNeedsDates) {
    try {
        at::parse_config("data.dir = x\n");
        FAIL();
    } catch (const at::ConfigError& e) {
        EXPECT_EQ(e.keys(), (std::vector<std::string>{"backtest.start", "backtest.end"}));
    }
}

TEST(Config, OutOfRangeValuesRejected) {
    EXPECT_THROW(at::parse_config("data.source = synthetic\nrebalance.lambda = 1.5\n"), at::ConfigError);
    EXPECT_THROW(at::parse_config("data.source = synthetic\ndata.interval = 7h\n"), at::ConfigError);
    EXPECT_THROW(at::parse_config("data.source = synthetic\ncost.funding_hours = 25\n"), at::ConfigError);
}

TEST(Config, SetValueOverrides) {
    auto c = at::parse_config("data.source = synthetic\n");
    at::set_config_value(c, "seed", "7");
    c.resolve();
    EXPECT_EQ(c.synthetic.seed, 7u);
    EXPECT_THROW(at::set_config_value(c, "nope", "1"), at::ConfigError);
}

TEST(Config, SnapshotCoversKeysInFixedOrder) {
    const auto c = at::parse_config("data.source = synthetic\n");
    const auto a = at::config_snapshot(c);
    EXPECT_EQ(a, at::config_snapshot(c));
    EXPECT_GT(a.size(), 40u);
    EXPECT_EQ(value_of(c, "data.source"), "synthetic");
}

TEST(Interval, ParseAndFormat) {
    EXPECT_EQ(at::parse_interval("6h"), 21600);
    EXPECT_EQ(at::parse_interval("1d"), 86400);
    EXPECT_EQ(at::parse_interval("24h"), 86400);
    EXPECT_EQ(at::parse_interval("900"), 900);
    EXPECT_THROW(at::parse_interval("5h"), std::invalid_argument);
    EXPECT_THROW(at::parse_interval("60"), std::invalid_argument);
    EXPECT_EQ(at::format_interval(21600), "6h");
    EXPECT_EQ(at::format_interval(86400), "1d");
    EXPECT_EQ(at::format_interval(900), "900");
}

TEST(Config, PublishedDefaults) {
    const auto c = at::parse_config("data.source = synthetic\n");
    const auto& b = c.backtest;
    EXPECT_EQ(b.rebalance.gamma_long, 1.3);
    EXPECT_EQ(b.rebalance.gamma_short, 1.7);
    EXPECT_EQ(b.rebalance.lambda, 0.7);
    EXPECT_EQ(b.rebalance.k_long, 15);
    EXPECT_EQ(b.rebalance.buffer_bars * b.interval, 24 * 3600);
    EXPECT_EQ(b.rebalance.grid.alpha, (std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}));
    EXPECT_EQ(b.costs.taker_fee_bps, 4.0);
    EXPECT_EQ(b.costs.funding_hours, (std::vector<int>{0, 8, 16}));
    EXPECT_EQ(b.rf_annual, 0.045);
    EXPECT_EQ(b.interval, 6 * 3600);
    EXPECT_EQ(c.bootstrap_reps, 10'000u);
    EXPECT_EQ(c.bootstrap_block_len, 20u);
    EXPECT_EQ(c.regime_window_days, 60);
    EXPECT_EQ(c.regime_threshold, 0.15);
}
