#include "adaptivetrend/benchmarks.h"

#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "adaptivetrend/cost_model.h"
#include "adaptivetrend/rebalancer.h"

namespace adaptivetrend {

std::string_view to_string(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::Tsmom: return "tsmom";
        case BenchmarkKind::VolScaledTsmom: return "vol_scaled_tsmom";
        case BenchmarkKind::BuyHold: return "buy_hold";
        case BenchmarkKind::EqualWeightBuyHold: return "equal_weight_buy_hold";
    }
    return "unknown";
}

BenchmarkKind parse_benchmark_kind(std::string_view name) {
    for (auto k : {BenchmarkKind::Tsmom, BenchmarkKind::VolScaledTsmom, BenchmarkKind::BuyHold,
                   BenchmarkKind::EqualWeightBuyHold}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown benchmark kind '" + std::string(name) + "'");
}

void BenchmarkSpec::validate() const {
    const bool momentum = kind == BenchmarkKind::Tsmom || kind == BenchmarkKind::VolScaledTsmom;
    if (momentum && lookback_months < 1) throw std::invalid_argument("benchmark: lookback_months must be >= 1");
    if (kind == BenchmarkKind::VolScaledTsmom) {
        if (!(vol_target_annual > 0.0)) throw std::invalid_argument("benchmark: vol_target must be > 0");
        if (vol_window_days < 1) throw std::invalid_argument("benchmark: vol_window_days must be >= 1");
        if (!(weight_cap_multiple > 0.0)) throw std::invalid_argument("benchmark: weight cap must be > 0");
    }
    if (universe_size < 1) throw std::invalid_argument("benchmark: universe_size must be >= 1");
    if (kind == BenchmarkKind::BuyHold && symbol.empty()) {
        throw std::invalid_argument("benchmark: buy_hold needs a symbol");
    }
}

std::string BenchmarkSpec::label() const {
    switch (kind) {
        case BenchmarkKind::Tsmom: return "TSMOM-" + std::to_string(lookback_months) + "M";
        case BenchmarkKind::VolScaledTsmom:
            return "VolScaled-TSMOM-" + std::to_string(lookback_months) + "M";
        case BenchmarkKind::BuyHold: return symbol + "-BH";
        case BenchmarkKind::EqualWeightBuyHold: return "EW-BH";
    }
    return "unknown";
}

std::vector<BenchmarkSpec> default_benchmarks() {
    BenchmarkSpec t1;
    BenchmarkSpec t3;
    t3.lookback_months = 3;
    BenchmarkSpec bh;
    bh.kind = BenchmarkKind::BuyHold;
    BenchmarkSpec ew;
    ew.kind = BenchmarkKind::EqualWeightBuyHold;
    BenchmarkSpec vs;
    vs.kind = BenchmarkKind::VolScaledTsmom;
    return {t1, t3, bh, ew, vs};
}

double BenchmarkMonth::gross_exposure() const {
    double g = 0.0;
    for (const auto& [sym, w] : weights) g += std::fabs(w);
    return g;
}

namespace {

std::vector<std::string> top_by_cap(const Universe& universe, Timestamp ts, std::size_t n) {
    RebalanceConfig rc;
    rc.k_long = static_cast<int>(n);
    rc.k_short = 1;
    auto cands = filter_universe(universe.caps, date_of(ts), rc);
    return cands ? cands->longs : std::vector<std::string>{};
}

bool has_bar_at(const PriceSeries& s, Timestamp ts) { return s.index_of(ts).has_value(); }

std::optional<double> trailing_vol(const PriceSeries& s, std::size_t i, int window_days) {
    const auto n = static_cast<std::size_t>(window_days * kSecondsPerDay / s.interval());
    if (n < 2 || i < n) return std::nullopt;
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t j = i + 1 - n; j <= i; ++j) {
        const double r = s[j].close / s[j - 1].close - 1.0;
        sum += r;
        sq += r * r;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
    if (!(var > 0.0)) return std::nullopt;
    return std::sqrt(var * bars_per_year(s.interval()));
}

}  // namespace

std::map<std::string, double> benchmark_weights(const BenchmarkSpec& spec, const Universe& universe,
                                                Timestamp ts) {
    spec.validate();
    std::map<std::string, double> out;
    if (spec.kind == BenchmarkKind::BuyHold) {
        const auto* s = universe.find(spec.symbol);
        if (s && has_bar_at(*s, ts)) out[spec.symbol] = 1.0;
        return out;
    }

    std::vector<std::string> members;
    for (const auto& sym : top_by_cap(universe, ts, spec.universe_size)) {
        const auto* s = universe.find(sym);
        if (s && has_bar_at(*s, ts)) members.push_back(sym);
    }

    if (spec.kind == BenchmarkKind::EqualWeightBuyHold) {
        for (const auto& sym : members) out[sym] = 1.0 / static_cast<double>(members.size());
        return out;
    }

    YearMonth ref_month = year_month_of(ts);
    // The rebalance bar closes the month before the holding month.
    ref_month = next_month(ref_month);
    for (int k = 0; k < spec.lookback_months; ++k) ref_month = prev_month(ref_month);

    struct Signal {
        std::string symbol;
        double sign;
        double scale;
    };
    std::vector<Signal> signals;
    for (const auto& sym : members) {
        const auto& s = *universe.find(sym);
        const Timestamp ref_ts = month_start(ref_month) - s.interval();
        if (s[0].timestamp > ref_ts) continue;
        const auto i = *s.index_of(ts);
        const auto j = *s.last_at_or_before(ref_ts);
        const double ret = s[i].close / s[j].close - 1.0;
        const double sign = ret > 0.0 ? 1.0 : (ret < 0.0 ? -1.0 : 0.0);
        double scale = 1.0;
        if (spec.kind == BenchmarkKind::VolScaledTsmom) {
            const auto vol = trailing_vol(s, i, spec.vol_window_days);
            if (!vol) continue;
            scale = std::min(spec.vol_target_annual / *vol, spec.weight_cap_multiple);
        }
        signals.push_back({sym, sign, scale});
    }
    for (const auto& sig : signals) {
        const double w = sig.sign * sig.scale / static_cast<double>(signals.size());
        if (w != 0.0) out[sig.symbol] = w;
    }
    return out;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Universe& universe,
                              const BacktestConfig& cfg) {
    spec.validate();
    cfg.validate();
    const auto interval = cfg.interval;
    const Timestamp first_ts = cfg.start - interval;
    const Timestamp final_ts = cfg.start + (cfg.end - cfg.start - 1) / interval * interval;

    {
        bool covers_start = false;
        bool covers_end = false;
        for (const auto& [sym, s] : universe.series) {
            if (s.empty()) continue;
            covers_start = covers_start || s[0].timestamp <= first_ts;
            covers_end = covers_end || s.bars().back().timestamp >= final_ts;
        }
        if (!covers_start || !covers_end) {
            throw InsufficientHistory("benchmark: data does not cover the backtest range");
        }
    }

    BenchmarkResult res;
    res.label = spec.label();
    const auto& costs = cfg.costs;
    double balance = cfg.initial_balance;
    double traded = 0.0;
    std::map<std::string, double> qty;

    auto bar_at = [&](const std::string& sym, Timestamp ts) -> const Bar* {
        const auto* s = universe.find(sym);
        const auto i = s ? s->last_at_or_before(ts) : std::nullopt;
        return i ? &(*s)[*i] : nullptr;
    };

    auto trade_to = [&](const std::string& sym, double target_notional, Timestamp ts) {
        const Bar* bar = bar_at(sym, ts);
        if (!bar) return;
        double& q = qty[sym];
        const double delta = std::fabs(target_notional - q * bar->close);
        if (delta > 0.0) {
            const double f = fee(delta, costs);
            const double sl = slippage(delta, *bar, interval, costs);
            balance -= f + sl;
            res.fee_total += f;
            res.slippage_total += sl;
            traded += delta;
        }
        q = target_notional / bar->close;
    };

    bool rebalanced_once = false;
    for (Timestamp ts = first_ts; ts <= final_ts; ts += interval) {
        if (ts > first_ts) {
            for (const auto& [sym, q] : qty) {
                if (q == 0.0) continue;
                const Bar* prev = bar_at(sym, ts - interval);
                const Bar* cur = bar_at(sym, ts);
                balance += q * (cur->close - prev->close);
                const Side side = q > 0.0 ? Side::Long : Side::Short;
                const double f = funding_between(side, std::fabs(q) * prev->close, sym, ts - interval, ts, costs);
                balance -= f;
                res.funding_total += f;
            }
        }
        if (ts == final_ts) {
            for (auto& [sym, q] : qty) {
                if (q != 0.0) trade_to(sym, 0.0, ts);
            }
        }
        res.equity.push_back({ts, balance});
        if (!(balance > 0.0)) break;

        const Timestamp next = ts + interval;
        const bool month_boundary = next == cfg.start || next == month_start(year_month_of(next));
        const bool rebalance_bar = ts != final_ts && month_boundary &&
                                   !(spec.kind == BenchmarkKind::BuyHold && rebalanced_once);
        if (!rebalance_bar) continue;

        BenchmarkMonth bm;
        bm.month = year_month_of(next);
        bm.rebalance_time = ts;
        bm.weights = benchmark_weights(spec, universe, ts);
        std::set<std::string> touched;
        for (const auto& [sym, q] : qty) touched.insert(sym);
        for (const auto& [sym, w] : bm.weights) touched.insert(sym);
        const double base = balance;
        for (const auto& sym : touched) {
            auto it = bm.weights.find(sym);
            trade_to(sym, it == bm.weights.end() ? 0.0 : it->second * base, ts);
        }
        res.months.push_back(std::move(bm));
        rebalanced_once = true;
    }

    const double bpy = bars_per_year(interval);
    res.metrics = compute_metrics(res.equity, {}, cfg.rf_annual, bpy);
    double balance_sum = 0.0;
    for (const auto& p : res.equity) balance_sum += p.balance;
    const double years = static_cast<double>(res.metrics.n_bars) / bpy;
    res.metrics.turnover = traded / (balance_sum / static_cast<double>(res.equity.size())) / years;
    return res;
}

}  // namespace adaptivetrend
