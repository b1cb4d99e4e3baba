#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaptivetrend/cost_model.h"
#include "adaptivetrend/indicators.h"
#include "adaptivetrend/market_data.h"
#include "adaptivetrend/trading_types.h"

namespace adaptivetrend {

struct SignalOptions {
    /// When false the stop stays at its entry level (entry -/+ alpha * ATR at entry).
    bool trailing_stop = true;
    /// Exit intrabar when the bar trades through the previous stop, filling at
    /// min(open, stop) for longs and max(open, stop) for shorts.
    bool intrabar_stops = false;
};

enum class StepEvent { None, Entry, Exit };

struct StepResult {
    std::optional<Position> position;
    std::optional<TradeRecord> closed;  // gross only; costs are attached by the caller
    StepEvent event = StepEvent::None;
};

/// One bar of the momentum / trailing-stop state machine.
///
/// Flat: opens long when momentum > theta_entry, short when momentum <
/// -theta_entry_short, filling at the close with the stop alpha * ATR away.
/// Open: ratchets the stop toward price (never away) and closes at the bar
/// close once the close crosses it. A bar that exits never also enters.
///
/// Throws std::logic_error if a position is open and either indicator is undefined.
StepResult step(const std::optional<Position>& state, const std::string& symbol, const Bar& bar,
                const IndicatorValue& mom, const IndicatorValue& atr, const StrategyParams& params,
                SideMode sides, double notional, const SignalOptions& options = {});

/// Per-bar record of a single-asset run. `side` and `stop` are the state machine's
/// output at the bar, before any end-of-window handling.
struct BarState {
    Timestamp timestamp = 0;
    int side = 0;  // +1 long, -1 short, 0 flat
    double stop = 0.0;
    StepEvent event = StepEvent::None;
    double gross_return = 0.0;
    double net_return = 0.0;
};

struct SingleAssetRun {
    TradeLedger ledger;
    std::vector<BarState> bars;

    std::vector<double> net_returns() const;
};

struct RunOptions {
    double notional = 1.0;
    CostConfig costs = CostConfig::zero();
    SignalOptions signal{};
};

/// Half-open timestamp window [start, end).
struct Window {
    Timestamp start = 0;
    Timestamp end = 0;
};

/// Runs the state machine over the bars of `series` inside `window`.
///
/// Per-bar gross return is side * (fill or close / previous close - 1) while a
/// position is held into the bar, else 0; net return subtracts that bar's costs
/// divided by the notional. Entries signalled on the window's last bar are not
/// filled, and anything still open there is closed at its close with `forced`.
SingleAssetRun run_single_asset(const PriceSeries& series, const StrategyParams& params,
                                SideMode sides, Window window, const RunOptions& options = {});

/// Same, with indicators precomputed over the whole series (they must align with it).
SingleAssetRun run_single_asset(const PriceSeries& series, const IndicatorSeries& mom,
                                const IndicatorSeries& atr, const StrategyParams& params,
                                SideMode sides, Window window, const RunOptions& options = {});

}  // namespace adaptivetrend
