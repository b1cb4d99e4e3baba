#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "adaptivetrend/analytics.h"
#include "fixtures.h"

namespace at = adaptivetrend;
using at::Regime;
using at::testing::kT0;

namespace {

at::EquityCurve curve(const std::vector<double>& balances, at::Timestamp start = kT0) {
    at::EquityCurve e;
    for (std::size_t i = 0; i < balances.size(); ++i) {
        e.push_back({start + static_cast<at::Timestamp>(i) * at::kH6Interval, balances[i]});
    }
    return e;
}

at::TradeRecord trade(double net, double size = 100.0, at::Timestamp exit = kT0) {
    at::TradeRecord t;
    t.symbol = "X";
    t.size = size;
    t.entry_price = 1.0;
    t.exit_price = 1.0;
    t.exit_time = exit;
    t.gross_pnl = net;
    t.finalize();
    return t;
}

std::vector<double> noise(std::uint32_t seed, std::size_t n, double mean, double sd) {
    std::mt19937 g(seed);
    std::normal_distribution<double> dist(mean, sd);
    std::vector<double> out(n);
    for (auto& x : out) x = dist(g);
    return out;
}

}  // namespace

TEST(MaxDrawdown, Examples) {
    const std::vector<double> e{100, 120, 90, 110};
    EXPECT_DOUBLE_EQ(at::max_drawdown(e), -0.25);
    const std::vector<double> up{1, 2, 3};
    EXPECT_EQ(at::max_drawdown(up), 0.0);
}

TEST(Metrics, SmallCurveMatchesOracle) {
    const auto m = at::compute_metrics(curve({100.0, 110.0, 99.0, 108.9, 102.0}), {}, 0.045, 1460);
    EXPECT_EQ(m.n_bars, 4u);
    EXPECT_NEAR(m.ann_return, 1376.4082919660768, 1e-9 * 1376.4);
    EXPECT_NEAR(m.ann_vol, 4.048511363736989, 1e-12);
    EXPECT_NEAR(*m.sharpe, 3.2921429729202827, 1e-12);
    EXPECT_NEAR(*m.sortino, 7.048153630104627, 1e-12);
    EXPECT_NEAR(m.mdd, -0.1, 1e-15);
    EXPECT_NEAR(*m.calmar, 13764.082919660772, 1e-6);
    EXPECT_EQ(m.n_trades, 0u);
    EXPECT_FALSE(m.win_rate);
    EXPECT_FALSE(m.profit_factor);
}

TEST(Metrics, FlatCurveLeavesRatiosUndefined) {
    const auto m = at::compute_metrics(curve({50, 50, 50}), {}, 0.045, 1460);
    EXPECT_EQ(m.ann_return, 0.0);
    EXPECT_FALSE(m.sharpe);
    EXPECT_FALSE(m.calmar);
    EXPECT_EQ(m.mdd, 0.0);
    EXPECT_THROW(at::compute_metrics(curve({1}), {}, 0.0, 1460), std::invalid_argument);
}

TEST(Metrics, TradeStatistics) {
    const at::TradeLedger l{trade(10), trade(5), trade(-5)};
    const auto m = at::compute_metrics(curve(std::vector<double>(1461, 1000.0)), l, 0.0, 1460);
    EXPECT_EQ(m.n_trades, 3u);
    EXPECT_NEAR(*m.win_rate, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(*m.profit_factor, 3.0, 1e-15);
    EXPECT_NEAR(*m.avg_trade_pnl, 0.1 / 3.0, 1e-15);
    EXPECT_NEAR(m.trades_per_month, 0.25, 1e-12);
    // Each trade moves 100 in and 100 out against a 1000 balance over one year.
    EXPECT_NEAR(m.turnover, 0.6, 1e-12);
    const auto wins_only = at::compute_metrics(curve({1, 2}), {trade(1)}, 0.0, 1460);
    EXPECT_FALSE(wins_only.profit_factor);
}

TEST(Metrics, JsonAndColumns) {
    const auto m = at::compute_metrics(curve({50, 50, 50}), {}, 0.045, 1460);
    const auto j = nlohmann::json::parse(at::metrics_json(m, "X (70/30)"));
    EXPECT_EQ(j["label"], "X (70/30)");
    EXPECT_TRUE(j["sharpe"].is_null());
    EXPECT_EQ(at::metrics_columns().size(), at::metrics_values(m).size());
    EXPECT_EQ(at::metrics_values(m)[2], "");
}

TEST(Regimes, ClassifyBoundaries) {
    EXPECT_EQ(at::classify_return(0.15), Regime::Sideways);
    EXPECT_EQ(at::classify_return(0.1501), Regime::Bull);
    EXPECT_EQ(at::classify_return(-0.15), Regime::Sideways);
    EXPECT_EQ(at::classify_return(-0.16), Regime::Bear);
    EXPECT_EQ(at::classify_return(0.05, 0.04), Regime::Bull);
}

TEST(Regimes, TrailingWindowOnDailyBars) {
    const auto btc = at::testing::closes_series("BTC", {100, 100, 120, 90, 100, 100}, 0.5, kT0, at::kSecondsPerDay);
    const auto labels = at::classify_regimes(btc, 2);
    ASSERT_EQ(labels.size(), 6u);
    EXPECT_FALSE(labels[0].regime);
    EXPECT_FALSE(labels[1].regime);
    EXPECT_EQ(*labels[2].regime, Regime::Bull);      // 120/100
    EXPECT_EQ(*labels[3].regime, Regime::Sideways);  // 90/100
    EXPECT_EQ(*labels[4].regime, Regime::Bear);      // 100/120
    EXPECT_EQ(*labels[5].regime, Regime::Sideways);  // 100/90
    EXPECT_THROW(at::classify_regimes(btc, 0), std::invalid_argument);
}

TEST(Regimes, MetricsSplitByLabel) {
    const auto e = curve({100.0, 110.0, 99.0, 108.9, 102.0});
    std::vector<at::RegimeLabel> labels{{e[1].timestamp, Regime::Bull},
                                        {e[2].timestamp, Regime::Bear},
                                        {e[3].timestamp, Regime::Bull},
                                        {e[4].timestamp, std::nullopt}};
    const at::TradeLedger l{trade(4, 100, e[1].timestamp), trade(-2, 100, e[2].timestamp),
                            trade(-1, 100, e[3].timestamp)};
    const auto reps = at::regime_metrics(e, labels, l, 0.0, 4.0);
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0].regime, Regime::Bull);
    EXPECT_EQ(reps[0].n_bars, 2u);
    EXPECT_NEAR(reps[0].ann_return, 1.21 * 1.21 - 1.0, 1e-12);
    EXPECT_EQ(reps[0].mdd, 0.0);
    EXPECT_FALSE(reps[0].sharpe);  // two equal returns
    EXPECT_EQ(reps[0].n_trades, 2u);
    EXPECT_NEAR(*reps[0].win_rate, 0.5, 1e-15);
    EXPECT_EQ(reps[1].regime, Regime::Bear);
    EXPECT_NEAR(reps[1].mdd, -0.1, 1e-12);
    EXPECT_NEAR(*reps[1].win_rate, 0.0, 1e-15);

    const auto csv = at::regime_table_csv(reps);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,Bull,Sideways,Bear");
    EXPECT_NE(csv.find("\nn_bars,2,,1\n"), std::string::npos);
}

TEST(Bootstrap, IdenticalSeries) {
    const auto a = noise(1, 400, 0.001, 0.02);
    at::BootstrapOptions o;
    o.n_reps = 500;
    const auto r = at::bootstrap_sharpe_test(a, a, o);
    EXPECT_EQ(*r.delta_sr, 0.0);
    EXPECT_EQ(*r.p_value, 1.0);
}

TEST(Bootstrap, DeterministicSwapAndJobInvariant) {
    const auto a = noise(2, 600, 0.002, 0.02);
    const auto b = noise(3, 600, 0.0, 0.02);
    at::BootstrapOptions o;
    o.n_reps = 800;
    o.seed = 7;
    const auto r1 = at::bootstrap_sharpe_test(a, b, o);
    const auto r2 = at::bootstrap_sharpe_test(a, b, o);
    o.jobs = 4;
    const auto r3 = at::bootstrap_sharpe_test(a, b, o);
    const auto rs = at::bootstrap_sharpe_test(b, a, o);
    EXPECT_EQ(*r1.p_value, *r2.p_value);
    EXPECT_EQ(*r1.p_value, *r3.p_value);
    EXPECT_NEAR(*rs.delta_sr, -*r1.delta_sr, 1e-12);
    EXPECT_NEAR(*rs.p_value, *r1.p_value, 1e-12);
    EXPECT_EQ(r1.n_reps, 800u);
    EXPECT_EQ(r1.seed, 7u);
}

TEST(Bootstrap, LargeDifferenceIsSignificant) {
    const auto base = noise(4, 1000, 0.0, 0.01);
    auto better = noise(5, 1000, 0.0, 0.01);
    for (auto& x : better) x += 0.004;
    at::BootstrapOptions o;
    o.n_reps = 1000;
    const auto r = at::bootstrap_sharpe_test(better, base, o);
    EXPECT_GT(*r.delta_sr, 0.0);
    EXPECT_LT(*r.p_value, 0.01);
}

TEST(Bootstrap, InputValidation) {
    const std::vector<double> a(30, 0.01);
    const std::vector<double> b(31, 0.01);
    EXPECT_THROW(at::bootstrap_sharpe_test(a, b), std::invalid_argument);
    at::BootstrapOptions o;
    o.block_len = 20;
    EXPECT_THROW(at::bootstrap_sharpe_test(a, a, o), std::invalid_argument);
    o.block_len = 0;
    EXPECT_THROW(at::bootstrap_sharpe_test(a, a, o), std::invalid_argument);
}

TEST(Bootstrap, ConstantSeriesHasNoSharpe) {
    const std::vector<double> a(100, 0.01);
    const auto b = noise(6, 100, 0.0, 0.01);
    const auto r = at::bootstrap_sharpe_test(a, b, {200, 10});
    EXPECT_FALSE(r.delta_sr);
    EXPECT_FALSE(r.p_value);
    const auto j = nlohmann::json::parse(at::bootstrap_json(r));
    EXPECT_TRUE(j["p_value"].is_null());
    EXPECT_EQ(j["block_len"], 10);
}
