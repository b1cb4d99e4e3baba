#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adaptivetrend/market_data.h"
#include "adaptivetrend/trading_types.h"

namespace adaptivetrend {

struct CostConfig {
    double taker_fee_bps = 4.0;
    double slip_coeff = 0.1;
    double slip_cap_bps = 50.0;
    double funding_rate_per_8h = 0.0001;
    std::vector<int> funding_hours{0, 8, 16};
    /// Optional per-symbol (timestamp, rate) series, ascending. Overrides the constant
    /// rate at events on or after the first entry for that symbol.
    std::map<std::string, std::vector<std::pair<Timestamp, double>>> funding_series;

    /// All frictions off.
    static CostConfig zero();
    void validate() const;
    void set_funding_series(const std::vector<FundingRateRecord>& rows);
};

/// Taker fee for one fill.
double fee(double notional, const CostConfig& cfg);

/// Size-linear market impact for one fill on `bar`. The 5-minute volume proxy is
/// bar volume * close divided by the number of 5-minute windows in the bar.
double slippage(double notional, const Bar& bar, std::int64_t interval, const CostConfig& cfg);

/// Funding settlement times t with from < t <= to.
std::vector<Timestamp> funding_events(Timestamp from, Timestamp to, const CostConfig& cfg);

double funding_rate_at(const std::string& symbol, Timestamp ts, const CostConfig& cfg);

/// Signed funding paid over (from, to]. Longs pay positive rates, shorts receive them.
double funding_between(Side side, double size, const std::string& symbol, Timestamp from,
                       Timestamp to, const CostConfig& cfg);

/// Funding over the position's life (entry_time, exit_time].
double funding(const Position& position, Timestamp exit_time, const CostConfig& cfg);

}  // namespace adaptivetrend
