#pragma once

#include <optional>
#include <span>
#include <vector>

#include "adaptivetrend/market_data.h"

namespace adaptivetrend {

struct IndicatorValue {
    Timestamp timestamp = 0;
    double value = 0.0;
    bool defined = false;
};

using IndicatorSeries = std::vector<IndicatorValue>;

/// Rate of change of close over `lookback` bars; undefined for the first `lookback` bars.
IndicatorSeries momentum(const PriceSeries& series, int lookback);

/// max(high - low, |high - prev close|, |low - prev close|); high - low on the first bar.
IndicatorSeries true_range(const PriceSeries& series);

/// Simple moving average of true range over `window` bars.
IndicatorSeries atr(const PriceSeries& series, int window);

/// Annualized Sharpe ratio of per-bar simple returns using the sample standard
/// deviation. Returns nullopt when fewer than two observations are given or the
/// returns have zero variance.
std::optional<double> rolling_sharpe(std::span<const double> returns, double rf_annual,
                                     double bars_per_year);

}  // namespace adaptivetrend
