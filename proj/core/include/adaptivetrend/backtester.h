#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptivetrend/cost_model.h"
#include "adaptivetrend/market_data.h"
#include "adaptivetrend/rebalancer.h"
#include "adaptivetrend/signal_engine.h"
#include "adaptivetrend/trading_types.h"

namespace adaptivetrend {

class InsufficientHistory : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BacktestConfig {
    Timestamp start = 0;  // inclusive, aligned to `interval`
    Timestamp end = 0;    // exclusive
    double initial_balance = 1'000'000.0;
    std::int64_t interval = kH6Interval;
    RebalanceConfig rebalance;
    CostConfig costs;
    double rf_annual = 0.045;

    // Component toggles used by the ablation variants.
    bool trailing_stop_enabled = true;
    bool cap_filter_enabled = true;
    bool sharpe_filter_enabled = true;
    bool reoptimize_enabled = true;
    std::optional<double> lambda_override;

    bool intrabar_stops = false;
    /// Keep a position open across the month boundary when next month's portfolio
    /// holds the same symbol on the same side. Off: everything closes at month end.
    bool carry_positions = false;
    int jobs = 1;
    bool record_trace = false;

    double effective_lambda() const { return lambda_override.value_or(rebalance.lambda); }
    void validate() const;
};

/// Per-bar state of one held symbol, recorded when BacktestConfig::record_trace is set.
struct TraceEntry {
    Timestamp timestamp = 0;
    std::string symbol;
    // Raw state-machine output at this bar.
    int signal_side = 0;
    double stop = 0.0;
    StepEvent event = StepEvent::None;
    // Position actually held after this bar's fills.
    std::optional<Position> open;
    double entry_fee = 0.0;
    double entry_slippage = 0.0;
};

struct BacktestResult {
    EquityCurve equity;
    TradeLedger ledger;
    std::vector<RebalanceRecord> rebalances;
    std::vector<TraceEntry> trace;
    bool bankrupt = false;

    std::vector<double> returns() const { return equity_returns(equity); }
};

/// Month-by-month loop: rebalance, size each holding at weight * month-start
/// balance, run the state machines bar by bar, charge fees and slippage per fill
/// and funding per settlement, then close out (or carry) at month end.
///
/// Throws InsufficientHistory when the data does not reach back one month plus
/// the indicator warm-up before `start`, or does not reach `end`.
BacktestResult run_backtest(const Universe& universe, const BacktestConfig& cfg);

enum class AblationVariant {
    Full,
    NoTrailingStop,
    NoCapFilter,
    NoSharpeFilter,
    SymmetricAllocation,
    FixedParams,
};

AblationVariant parse_ablation_variant(std::string_view name);
std::string_view to_string(AblationVariant v);
std::vector<AblationVariant> all_ablation_variants();

/// The config with the variant's toggle applied.
BacktestConfig ablation_config(const BacktestConfig& base, AblationVariant variant);

}  // namespace adaptivetrend
