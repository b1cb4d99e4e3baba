#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adaptivetrend/time.h"

namespace adaptivetrend {

enum class Side { Long, Short };

/// Which entry directions the state machine may take.
enum class SideMode { LongOnly, ShortOnly, Both };

inline double side_sign(Side s) { return s == Side::Long ? 1.0 : -1.0; }
std::string_view to_string(Side s);

/// Per-asset tunables re-optimized monthly.
struct StrategyParams {
    double theta_entry = 0.05;        // long entry: momentum > theta_entry
    double theta_entry_short = 0.05;  // short entry: momentum < -theta_entry_short
    double alpha = 2.5;               // ATR multiple for the trailing stop
    int lookback = 12;                // momentum lookback L, in bars
    int atr_window = 14;              // ATR window k, in bars

    /// Throws std::invalid_argument on a bound violation. Thresholds may be +inf.
    void validate() const;

    friend bool operator==(const StrategyParams&, const StrategyParams&) = default;
};

struct Position {
    std::string symbol;
    Side side = Side::Long;
    Timestamp entry_time = 0;
    double entry_price = 0.0;
    double size = 0.0;  // quote notional at entry
    double stop = 0.0;

    double quantity() const { return size / entry_price; }
};

/// Closed trade with full cost attribution. net_pnl = gross - fee - slippage - funding.
struct TradeRecord {
    std::string symbol;
    Side side = Side::Long;
    Timestamp entry_time = 0;
    double entry_price = 0.0;
    Timestamp exit_time = 0;
    double exit_price = 0.0;
    double size = 0.0;
    double gross_pnl = 0.0;
    double fee_cost = 0.0;
    double slippage_cost = 0.0;
    double funding_cost = 0.0;
    double net_pnl = 0.0;
    bool forced = false;

    /// Recomputes net_pnl from its components.
    void finalize() { net_pnl = gross_pnl - fee_cost - slippage_cost - funding_cost; }
};

using TradeLedger = std::vector<TradeRecord>;

struct EquityPoint {
    Timestamp timestamp = 0;
    double balance = 0.0;

    friend bool operator==(const EquityPoint&, const EquityPoint&) = default;
};

/// Account balance marked to market at every bar close.
using EquityCurve = std::vector<EquityPoint>;

/// Simple returns between consecutive equity points (size n - 1).
std::vector<double> equity_returns(const EquityCurve& equity);

// Equity CSV: `timestamp,balance`
std::string serialize_equity(const EquityCurve& equity);
EquityCurve parse_equity(const std::string& text);

/// Gross PnL of a fixed-quantity position moved from entry to exit price.
double gross_pnl(Side side, double size, double entry_price, double exit_price);

// Ledger CSV:
// `symbol,side,entry_ts,entry_px,exit_ts,exit_px,size,gross_pnl,fee,slippage,funding,net_pnl,forced`
std::string serialize_ledger(const TradeLedger& ledger);
TradeLedger parse_ledger(const std::string& text);

}  // namespace adaptivetrend
