#pragma once

#include <map>
#include <string>
#include <vector>

#include "adaptivetrend/analytics.h"
#include "adaptivetrend/backtester.h"

namespace adaptivetrend {

enum class BenchmarkKind { Tsmom, VolScaledTsmom, BuyHold, EqualWeightBuyHold };

std::string_view to_string(BenchmarkKind kind);
BenchmarkKind parse_benchmark_kind(std::string_view name);

struct BenchmarkSpec {
    BenchmarkKind kind = BenchmarkKind::Tsmom;
    int lookback_months = 1;
    double vol_target_annual = 0.10;
    int vol_window_days = 60;
    std::size_t universe_size = 20;
    /// Per-asset magnitude cap for vol scaling, as a multiple of 1/N.
    double weight_cap_multiple = 4.0;
    std::string symbol = "BTC";  // buy_hold only

    void validate() const;
    std::string label() const;
};

/// TSMOM-1M, TSMOM-3M, BTC buy-and-hold, EW buy-and-hold, vol-scaled TSMOM.
std::vector<BenchmarkSpec> default_benchmarks();

struct BenchmarkMonth {
    YearMonth month;
    Timestamp rebalance_time = 0;
    std::map<std::string, double> weights;  // signed fractions of balance

    double gross_exposure() const;
};

struct BenchmarkResult {
    std::string label;
    EquityCurve equity;
    MetricsReport metrics;
    std::vector<BenchmarkMonth> months;
    double fee_total = 0.0;
    double slippage_total = 0.0;
    double funding_total = 0.0;
};

/// Target weights for one rebalance at the close of bar `ts`. Assets without
/// enough history for their signal are left out.
std::map<std::string, double> benchmark_weights(const BenchmarkSpec& spec, const Universe& universe,
                                                Timestamp ts);

/// Simulates the benchmark over [cfg.start, cfg.end) with cfg's balance, interval
/// and cost model. Rebalances fill at the close of the bar before each month start
/// (buy_hold only the first); positions are liquidated at the close of the final bar.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Universe& universe,
                              const BacktestConfig& cfg);

}  // namespace adaptivetrend
