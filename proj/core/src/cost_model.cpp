#include "adaptivetrend/cost_model.h"

#include <algorithm>
#include <stdexcept>

namespace adaptivetrend {

CostConfig CostConfig::zero() {
    CostConfig c;
    c.taker_fee_bps = 0.0;
    c.slip_coeff = 0.0;
    c.slip_cap_bps = 0.0;
    c.funding_rate_per_8h = 0.0;
    return c;
}

void CostConfig::validate() const {
    if (!(taker_fee_bps >= 0.0)) throw std::invalid_argument("cost.taker_fee_bps must be >= 0");
    if (!(slip_coeff >= 0.0)) throw std::invalid_argument("cost.slip_coeff must be >= 0");
    if (!(slip_cap_bps >= 0.0)) throw std::invalid_argument("cost.slip_cap_bps must be >= 0");
    for (std::size_t i = 0; i < funding_hours.size(); ++i) {
        const int h = funding_hours[i];
        if (h < 0 || h > 23) throw std::invalid_argument("cost.funding_hours must lie in 0..23");
        for (std::size_t j = 0; j < i; ++j) {
            if (funding_hours[j] == h) throw std::invalid_argument("cost.funding_hours has duplicates");
        }
    }
}

void CostConfig::set_funding_series(const std::vector<FundingRateRecord>& rows) {
    funding_series.clear();
    for (const auto& r : rows) funding_series[r.symbol].emplace_back(r.timestamp, r.rate_8h);
    for (auto& [sym, s] : funding_series) std::stable_sort(s.begin(), s.end());
}

double fee(double notional, const CostConfig& cfg) {
    return notional * cfg.taker_fee_bps * 1e-4;
}

double slippage(double notional, const Bar& bar, std::int64_t interval, const CostConfig& cfg) {
    if (notional <= 0.0) return 0.0;
    const double cap = cfg.slip_cap_bps * 1e-4;
    const double windows = static_cast<double>(interval) / 300.0;
    const double est_5min = bar.volume * bar.close / windows;
    const double rate = est_5min > 0.0 ? std::min(cfg.slip_coeff * notional / est_5min, cap) : cap;
    return rate * notional;
}

std::vector<Timestamp> funding_events(Timestamp from, Timestamp to, const CostConfig& cfg) {
    std::vector<Timestamp> out;
    if (to <= from || cfg.funding_hours.empty()) return out;
    auto hours = cfg.funding_hours;
    std::sort(hours.begin(), hours.end());
    hours.erase(std::unique(hours.begin(), hours.end()), hours.end());
    for (Timestamp day = to_timestamp(date_of(from)); day <= to; day += kSecondsPerDay) {
        for (int h : hours) {
            const Timestamp t = day + static_cast<Timestamp>(h) * 3600;
            if (t > from && t <= to) out.push_back(t);
        }
    }
    return out;
}

double funding_rate_at(const std::string& symbol, Timestamp ts, const CostConfig& cfg) {
    auto it = cfg.funding_series.find(symbol);
    if (it == cfg.funding_series.end()) return cfg.funding_rate_per_8h;
    const auto& s = it->second;
    auto pos = std::upper_bound(s.begin(), s.end(), ts,
                                [](Timestamp t, const auto& p) { return t < p.first; });
    if (pos == s.begin()) return cfg.funding_rate_per_8h;
    return std::prev(pos)->second;
}

double funding_between(Side side, double size, const std::string& symbol, Timestamp from,
                       Timestamp to, const CostConfig& cfg) {
    if (to <= from) return 0.0;
    if (cfg.funding_rate_per_8h == 0.0 && cfg.funding_series.empty()) return 0.0;
    // Hot path in grid search: walk days inline instead of materializing events.
    double total = 0.0;
    for (Timestamp day = to_timestamp(date_of(from)); day <= to; day += kSecondsPerDay) {
        for (int h : cfg.funding_hours) {
            const Timestamp t = day + static_cast<Timestamp>(h) * 3600;
            if (t > from && t <= to) total += size * funding_rate_at(symbol, t, cfg);
        }
    }
    return side_sign(side) * total;
}

double funding(const Position& position, Timestamp exit_time, const CostConfig& cfg) {
    return funding_between(position.side, position.size, position.symbol, position.entry_time,
                           exit_time, cfg);
}

}  // namespace adaptivetrend
