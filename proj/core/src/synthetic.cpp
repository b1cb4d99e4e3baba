#include "adaptivetrend/synthetic.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adaptivetrend/pcg.h"

namespace adaptivetrend {

void SyntheticSpec::validate() const {
    if (n_symbols == 0) throw std::invalid_argument("synthetic: n_symbols must be >= 1");
    if (interval <= 0) throw std::invalid_argument("synthetic: interval must be positive");
    if (!(start_price > 0.0)) throw std::invalid_argument("synthetic: start_price must be positive");
    if (!(market_correlation >= 0.0 && market_correlation <= 1.0)) {
        throw std::invalid_argument("synthetic: market_correlation must lie in [0, 1]");
    }
    std::size_t total = 0;
    for (const auto& seg : regimes) {
        if (!(seg.vol > 0.0)) throw std::invalid_argument("synthetic: regime volatility must be > 0");
        total += seg.bars;
    }
    if (total != n_bars) {
        throw std::invalid_argument("synthetic: regime durations sum to " + std::to_string(total) +
                                    " but n_bars = " + std::to_string(n_bars));
    }
}

std::string synthetic_symbol_name(std::size_t index) {
    if (index == 0) return "BTC";
    std::string digits = std::to_string(index);
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    return "ALT" + digits;
}

Universe generate_synthetic_universe(const SyntheticSpec& spec) {
    spec.validate();
    const double dt = 1.0 / bars_per_year(spec.interval);
    const double sqrt_dt = std::sqrt(dt);
    const double rho = spec.market_correlation;
    const double w_market = std::sqrt(rho);
    const double w_own = std::sqrt(1.0 - rho);

    // Expand the regime schedule to per-bar (drift, vol).
    std::vector<const RegimeSegment*> seg_of_bar;
    seg_of_bar.reserve(spec.n_bars);
    for (const auto& seg : spec.regimes) seg_of_bar.insert(seg_of_bar.end(), seg.bars, &seg);

    std::vector<double> market_z(spec.n_bars);
    {
        Pcg64 rng(spec.seed, 0);
        for (auto& z : market_z) z = rng.normal();
    }

    Universe u;
    for (std::size_t i = 0; i < spec.n_symbols; ++i) {
        Pcg64 rng(spec.seed, i + 1);
        const double p0 = spec.start_price / static_cast<double>(i + 1);
        const double cap0 = 1e11 * std::pow(0.85, static_cast<double>(i));
        const double supply = cap0 / p0;
        // About 10% of initial cap trades per day.
        const double bar_turnover = cap0 * 0.10 * static_cast<double>(spec.interval) / kSecondsPerDay;

        std::vector<Bar> bars;
        bars.reserve(spec.n_bars);
        double prev_close = p0;
        for (std::size_t t = 0; t < spec.n_bars; ++t) {
            const auto& seg = *seg_of_bar[t];
            const double sd = seg.vol * sqrt_dt;
            const double z = w_market * market_z[t] + w_own * rng.normal();
            const double zh = rng.normal();
            const double zl = rng.normal();
            const double zv = rng.normal();

            Bar b;
            b.timestamp = spec.start + static_cast<Timestamp>(t) * spec.interval;
            b.open = prev_close;
            b.close = prev_close * std::exp(seg.drift * dt + sd * z);
            b.high = std::max(b.open, b.close) * std::exp(0.5 * sd * std::fabs(zh));
            b.low = std::min(b.open, b.close) * std::exp(-0.5 * sd * std::fabs(zl));
            b.volume = bar_turnover * std::exp(0.25 * zv) / b.close;
            bars.push_back(b);
            prev_close = b.close;
        }

        const auto symbol = synthetic_symbol_name(i);
        Date last_day{};
        bool have_day = false;
        for (const auto& b : bars) {
            const auto day = date_of(b.timestamp);
            if (have_day && day == last_day) continue;
            u.caps.push_back({symbol, day, supply * b.open});
            last_day = day;
            have_day = true;
        }
        u.series.emplace(symbol, PriceSeries(symbol, spec.interval, std::move(bars)));
    }
    std::sort(u.caps.begin(), u.caps.end(), [](const MarketCapRecord& a, const MarketCapRecord& b) {
        return a.date != b.date ? a.date < b.date : a.symbol < b.symbol;
    });
    return u;
}

}  // namespace adaptivetrend
