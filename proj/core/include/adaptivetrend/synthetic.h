#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptivetrend/market_data.h"

namespace adaptivetrend {

struct RegimeSegment {
    std::size_t bars = 0;
    double drift = 0.0;  // annualized drift of log returns
    double vol = 0.2;    // annualized volatility of log returns
};

/// Parameters of the synthetic universe generator.
///
/// Each symbol follows a piecewise geometric Brownian motion. Per bar, with
/// dt = interval / 365 days:
///
///   z        = sqrt(rho) * z_market + sqrt(1 - rho) * z_symbol
///   log(c/o) = drift * dt + vol * sqrt(dt) * z
///   high     = max(o, c) * exp(0.5 * vol * sqrt(dt) * |z_h|)
///   low      = min(o, c) * exp(-0.5 * vol * sqrt(dt) * |z_l|)
///
/// Randomness comes from Pcg64(seed, stream): stream 0 drives the shared
/// market factor, stream i + 1 drives symbol i, drawing z_symbol, z_h, z_l and
/// a volume shock in that order each bar. Symbol 0 is named "BTC", the others
/// "ALT001", "ALT002", ... Market caps are one record per symbol per UTC day,
/// equal to a fixed per-symbol supply times the open of that day's first bar.
struct SyntheticSpec {
    std::uint64_t seed = 42;
    std::size_t n_symbols = 10;
    std::size_t n_bars = 0;
    std::vector<RegimeSegment> regimes;
    std::int64_t interval = kH6Interval;
    Timestamp start = 1'609'459'200;  // 2021-01-01 00:00 UTC
    double start_price = 100.0;
    double market_correlation = 0.0;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

Universe generate_synthetic_universe(const SyntheticSpec& spec);

std::string synthetic_symbol_name(std::size_t index);

}  // namespace adaptivetrend
