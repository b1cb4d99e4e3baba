#include "adaptivetrend/indicators.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptivetrend {

IndicatorSeries momentum(const PriceSeries& series, int lookback) {
    if (lookback < 1) throw std::invalid_argument("momentum: lookback must be >= 1");
    const auto& bars = series.bars();
    const auto lag = static_cast<std::size_t>(lookback);
    IndicatorSeries out(bars.size());
    for (std::size_t t = 0; t < bars.size(); ++t) {
        out[t].timestamp = bars[t].timestamp;
        if (t < lag) continue;
        const double base = bars[t - lag].close;
        out[t].value = (bars[t].close - base) / base;
        out[t].defined = true;
    }
    return out;
}

IndicatorSeries true_range(const PriceSeries& series) {
    const auto& bars = series.bars();
    IndicatorSeries out(bars.size());
    for (std::size_t t = 0; t < bars.size(); ++t) {
        const auto& b = bars[t];
        double tr = b.high - b.low;
        if (t > 0) {
            const double pc = bars[t - 1].close;
            tr = std::max({tr, std::fabs(b.high - pc), std::fabs(b.low - pc)});
        }
        out[t] = {b.timestamp, tr, true};
    }
    return out;
}

IndicatorSeries atr(const PriceSeries& series, int window) {
    if (window < 1) throw std::invalid_argument("atr: window must be >= 1");
    const auto tr = true_range(series);
    const auto k = static_cast<std::size_t>(window);
    IndicatorSeries out(tr.size());
    for (std::size_t t = 0; t < tr.size(); ++t) {
        out[t].timestamp = tr[t].timestamp;
        if (t + 1 < k) continue;
        // Summed fresh per window so each value depends only on its own k bars.
        double sum = 0.0;
        for (std::size_t j = t + 1 - k; j <= t; ++j) sum += tr[j].value;
        out[t].value = sum / static_cast<double>(k);
        out[t].defined = true;
    }
    return out;
}

std::optional<double> rolling_sharpe(std::span<const double> returns, double rf_annual,
                                     double bars_per_year) {
    const auto n = returns.size();
    if (n < 2) return std::nullopt;
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    // Rounding in the mean can leave a tiny residual on constant input.
    if (!(sd > 1e-15 * std::max(1.0, std::fabs(mean)))) return std::nullopt;
    const double rf_bar = rf_annual / bars_per_year;
    return (mean - rf_bar) / sd * std::sqrt(bars_per_year);
}

}  // namespace adaptivetrend
