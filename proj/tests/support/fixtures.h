#pragma once

#include <array>
#include <string>
#include <vector>

#include "adaptivetrend/market_data.h"
#include "adaptivetrend/synthetic.h"

namespace adaptivetrend::testing {

inline constexpr Timestamp kT0 = 1'609'459'200;  // 2021-01-01

struct Ohlc {
    double open, high, low, close;
};

inline PriceSeries make_series(const std::string& symbol, const std::vector<Ohlc>& rows,
                               Timestamp start = kT0, std::int64_t interval = kH6Interval,
                               double volume = 1e9) {
    std::vector<Bar> bars;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        bars.push_back({start + static_cast<Timestamp>(i) * interval, r.open, r.high, r.low, r.close, volume});
    }
    return PriceSeries(symbol, interval, std::move(bars));
}

/// Closes only; high/low straddle the close by `spread`.
inline PriceSeries closes_series(const std::string& symbol, const std::vector<double>& closes,
                                 double spread = 0.5, Timestamp start = kT0,
                                 std::int64_t interval = kH6Interval) {
    std::vector<Ohlc> rows;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        const double o = i == 0 ? closes[0] : closes[i - 1];
        rows.push_back({o, std::max(o, closes[i]) + spread, std::min(o, closes[i]) - spread, closes[i]});
    }
    return make_series(symbol, rows, start, interval);
}

/// Twenty hand-written bars: a rally, a pullback, a slide and a partial recovery.
inline const std::vector<Ohlc>& scripted20() {
    static const std::vector<Ohlc> rows = {
        {100.0, 101.0, 99.0, 100.0}, {100.0, 102.0, 99.5, 101.0}, {101.0, 101.5, 99.0, 99.5},
        {99.5, 103.0, 99.0, 102.5},  {102.5, 106.0, 102.0, 105.5}, {105.5, 108.5, 105.0, 108.0},
        {108.0, 110.0, 107.0, 109.5}, {109.5, 113.0, 109.0, 112.0}, {112.0, 112.5, 108.5, 109.0},
        {109.0, 115.0, 108.5, 114.5}, {114.5, 116.0, 113.0, 115.0}, {115.0, 115.5, 109.0, 110.0},
        {110.0, 110.5, 104.0, 105.0}, {105.0, 105.5, 99.0, 100.0},  {100.0, 100.5, 95.0, 96.0},
        {96.0, 97.0, 92.0, 93.0},    {93.0, 96.5, 92.5, 96.0},    {96.0, 100.0, 95.5, 99.5},
        {99.5, 101.0, 97.0, 98.0},   {98.0, 99.0, 94.0, 95.0},
    };
    return rows;
}

inline SyntheticSpec synthetic_spec(std::uint64_t seed, std::size_t n_symbols, std::size_t n_bars,
                                    double drift = 0.0, double vol = 0.8, double rho = 0.3) {
    SyntheticSpec s;
    s.seed = seed;
    s.n_symbols = n_symbols;
    s.n_bars = n_bars;
    s.regimes = {RegimeSegment{n_bars, drift, vol}};
    s.market_correlation = rho;
    return s;
}

}  // namespace adaptivetrend::testing
