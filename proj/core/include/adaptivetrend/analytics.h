#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptivetrend/market_data.h"
#include "adaptivetrend/trading_types.h"

namespace adaptivetrend {

inline constexpr double kDefaultRiskFree = 0.045;

/// Performance statistics of one run. Optional fields are undefined when their
/// denominator is zero (no variance, no drawdown, no trades, no losing trades).
struct MetricsReport {
    std::size_t n_bars = 0;
    double ann_return = 0.0;  // geometric
    double ann_vol = 0.0;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    double mdd = 0.0;  // <= 0
    std::optional<double> calmar;
    std::size_t n_trades = 0;
    std::optional<double> win_rate;
    std::optional<double> avg_trade_pnl;  // mean of net_pnl / size
    std::optional<double> profit_factor;
    double trades_per_month = 0.0;
    double turnover = 0.0;  // traded notional / average balance, per year
};

MetricsReport compute_metrics(const EquityCurve& equity, const TradeLedger& ledger,
                              double rf_annual, double bars_per_year);

/// Most negative equity / running peak - 1; zero for a non-decreasing path.
double max_drawdown(std::span<const double> equity);

/// Single-line JSON object; undefined fields are null.
std::string metrics_json(const MetricsReport& m, const std::string& label);

/// Column names and values in a fixed order, for sweep and report tables.
std::vector<std::string> metrics_columns();
std::vector<std::string> metrics_values(const MetricsReport& m);

enum class Regime { Bull, Sideways, Bear };
std::string_view to_string(Regime r);

struct RegimeLabel {
    Timestamp timestamp = 0;
    std::optional<Regime> regime;  // nullopt before `window_days` of history exist
};

/// Bull when the trailing return is above +threshold, Bear below -threshold,
/// Sideways otherwise (boundaries included).
Regime classify_return(double trailing_return, double threshold = 0.15);

/// Labels each BTC bar by its close over the close `window_days` earlier.
std::vector<RegimeLabel> classify_regimes(const PriceSeries& btc, int window_days = 60,
                                          double threshold = 0.15);

struct RegimeReport {
    Regime regime = Regime::Sideways;
    std::size_t n_bars = 0;
    double ann_return = 0.0;
    std::optional<double> sharpe;
    double mdd = 0.0;
    std::size_t n_trades = 0;
    std::optional<double> win_rate;
    std::optional<double> avg_trade_pnl;
};

/// Splits the equity curve's per-bar returns by the label at each bar. Drawdown is
/// taken on the concatenated within-regime path. Trades count toward the regime at
/// their exit bar. Regimes with no labeled bars are omitted.
std::vector<RegimeReport> regime_metrics(const EquityCurve& equity,
                                         const std::vector<RegimeLabel>& labels,
                                         const TradeLedger& ledger, double rf_annual,
                                         double bars_per_year);

/// `metric,Bull,Sideways,Bear` table, blank cells for absent regimes.
std::string regime_table_csv(const std::vector<RegimeReport>& reports);

struct BootstrapResult {
    std::optional<double> delta_sr;
    std::optional<double> p_value;
    std::size_t n_reps = 0;
    std::size_t block_len = 0;
    std::uint64_t seed = 0;
};

struct BootstrapOptions {
    std::size_t n_reps = 10'000;
    std::size_t block_len = 20;
    std::uint64_t seed = 42;
    double rf_annual = kDefaultRiskFree;
    double bars_per_year = 1460.0;
    int jobs = 1;
};

/// Paired circular block bootstrap of the Sharpe-ratio difference SR(a) - SR(b).
///
/// Each replicate draws ceil(n / block_len) block starts uniformly from [0, n) using
/// Pcg64(seed, replicate index), wraps indices modulo n, and applies the same
/// indices to both series. With d the observed difference and c the centered
/// replicate difference, p = min(1, 2 * min(P(c >= |d|), P(c <= -|d|))).
/// A replicate with zero variance in either series is redrawn up to 10 times;
/// after that the p-value is undefined.
BootstrapResult bootstrap_sharpe_test(std::span<const double> a, std::span<const double> b,
                                      const BootstrapOptions& options = {});

std::string bootstrap_json(const BootstrapResult& r);

}  // namespace adaptivetrend
