#include "adaptivetrend/signal_engine.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaptivetrend {

namespace {

TradeRecord close_record(const Position& p, Timestamp ts, double exit_price) {
    TradeRecord t;
    t.symbol = p.symbol;
    t.side = p.side;
    t.entry_time = p.entry_time;
    t.entry_price = p.entry_price;
    t.exit_time = ts;
    t.exit_price = exit_price;
    t.size = p.size;
    t.gross_pnl = gross_pnl(p.side, p.size, p.entry_price, exit_price);
    t.finalize();
    return t;
}

}  // namespace

StepResult step(const std::optional<Position>& state, const std::string& symbol, const Bar& bar,
                const IndicatorValue& mom, const IndicatorValue& atr, const StrategyParams& params,
                SideMode sides, double notional, const SignalOptions& options) {
    StepResult r;
    if (!state) {
        if (!mom.defined || !atr.defined) return r;
        const bool go_long = sides != SideMode::ShortOnly && mom.value > params.theta_entry;
        const bool go_short = sides != SideMode::LongOnly && mom.value < -params.theta_entry_short;
        if (!go_long && !go_short) return r;
        if (!(notional > 0.0)) throw std::invalid_argument("step: entry notional must be positive");
        Position p;
        p.symbol = symbol;
        p.side = go_long ? Side::Long : Side::Short;
        p.entry_time = bar.timestamp;
        p.entry_price = bar.close;
        p.size = notional;
        const double band = params.alpha * atr.value;
        p.stop = go_long ? bar.close - band : bar.close + band;
        r.position = std::move(p);
        r.event = StepEvent::Entry;
        return r;
    }

    if (!atr.defined) {
        throw std::logic_error("step: ATR undefined while a position is open (" + symbol + " @ " +
                               std::to_string(bar.timestamp) + ")");
    }
    Position p = *state;
    const bool is_long = p.side == Side::Long;

    if (options.intrabar_stops) {
        const bool breached = is_long ? bar.low < p.stop : bar.high > p.stop;
        if (breached) {
            const double fill = is_long ? std::min(bar.open, p.stop) : std::max(bar.open, p.stop);
            r.closed = close_record(p, bar.timestamp, fill);
            r.event = StepEvent::Exit;
            return r;
        }
    }

    if (options.trailing_stop) {
        const double band = params.alpha * atr.value;
        p.stop = is_long ? std::max(p.stop, bar.close - band) : std::min(p.stop, bar.close + band);
    }
    const bool hit = is_long ? bar.close < p.stop : bar.close > p.stop;
    if (hit) {
        r.closed = close_record(p, bar.timestamp, bar.close);
        r.event = StepEvent::Exit;
        return r;
    }
    r.position = std::move(p);
    return r;
}

std::vector<double> SingleAssetRun::net_returns() const {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(b.net_return);
    return out;
}

SingleAssetRun run_single_asset(const PriceSeries& series, const StrategyParams& params,
                                SideMode sides, Window window, const RunOptions& options) {
    return run_single_asset(series, momentum(series, params.lookback),
                            atr(series, params.atr_window), params, sides, window, options);
}

SingleAssetRun run_single_asset(const PriceSeries& series, const IndicatorSeries& mom,
                                const IndicatorSeries& atr_values, const StrategyParams& params,
                                SideMode sides, Window window, const RunOptions& options) {
    if (mom.size() != series.size() || atr_values.size() != series.size()) {
        throw std::invalid_argument("run_single_asset: indicators do not align with series");
    }
    SingleAssetRun out;
    const std::size_t a = series.lower_bound(window.start);
    const std::size_t b = series.lower_bound(window.end);
    if (a >= b) return out;
    out.bars.reserve(b - a);

    const auto& costs = options.costs;
    const auto interval = series.interval();
    const double notional = options.notional;
    std::optional<Position> pos;
    double entry_fee = 0.0;
    double entry_slip = 0.0;

    auto attach_costs = [&](TradeRecord& t, const Bar& bar) {
        const double exit_notional = t.size * t.exit_price / t.entry_price;
        const double exit_fee = fee(exit_notional, costs);
        const double exit_slip = slippage(exit_notional, bar, interval, costs);
        t.fee_cost = entry_fee + exit_fee;
        t.slippage_cost = entry_slip + exit_slip;
        t.funding_cost = funding(*pos, t.exit_time, costs);
        t.finalize();
        return exit_fee + exit_slip;
    };

    for (std::size_t i = a; i < b; ++i) {
        const Bar& bar = series[i];
        const bool last = i + 1 == b;
        BarState st;
        st.timestamp = bar.timestamp;
        double bar_costs = 0.0;
        const bool held = pos.has_value();
        if (held) {
            bar_costs += funding_between(pos->side, pos->size, pos->symbol, series[i - 1].timestamp,
                                         bar.timestamp, costs);
        }

        StepResult r;
        if (held || (mom[i].defined && atr_values[i].defined)) {
            r = step(pos, series.symbol(), bar, mom[i], atr_values[i], params, sides, notional,
                     options.signal);
        }
        st.event = r.event;
        if (r.position) {
            st.side = r.position->side == Side::Long ? 1 : -1;
            st.stop = r.position->stop;
        } else {
            st.stop = std::numeric_limits<double>::quiet_NaN();
        }

        double gross = 0.0;
        if (held) {
            const double mark = r.closed ? r.closed->exit_price : bar.close;
            gross = side_sign(pos->side) * (mark / series[i - 1].close - 1.0);
        }

        if (r.closed) {
            TradeRecord t = *r.closed;
            bar_costs += attach_costs(t, bar);
            out.ledger.push_back(std::move(t));
            pos.reset();
        } else if (r.event == StepEvent::Entry) {
            if (!last) {
                entry_fee = fee(r.position->size, costs);
                entry_slip = slippage(r.position->size, bar, interval, costs);
                pos = std::move(r.position);
                bar_costs += entry_fee + entry_slip;
            }
        } else if (held) {
            pos = std::move(r.position);
        }

        if (last && pos) {
            TradeRecord t;
            t.symbol = pos->symbol;
            t.side = pos->side;
            t.entry_time = pos->entry_time;
            t.entry_price = pos->entry_price;
            t.exit_time = bar.timestamp;
            t.exit_price = bar.close;
            t.size = pos->size;
            t.gross_pnl = gross_pnl(pos->side, pos->size, pos->entry_price, bar.close);
            t.forced = true;
            bar_costs += attach_costs(t, bar);
            out.ledger.push_back(std::move(t));
            pos.reset();
        }

        st.gross_return = gross;
        st.net_return = gross - bar_costs / notional;
        out.bars.push_back(st);
    }
    return out;
}

}  // namespace adaptivetrend
