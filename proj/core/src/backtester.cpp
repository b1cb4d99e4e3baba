#include "adaptivetrend/backtester.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "adaptivetrend/indicators.h"

namespace adaptivetrend {

void BacktestConfig::validate() const {
    if (!(start < end)) throw std::invalid_argument("backtest: start must precede end");
    if (!(initial_balance > 0.0)) throw std::invalid_argument("backtest: initial_balance must be > 0");
    if (interval <= 0) throw std::invalid_argument("backtest: interval must be > 0");
    if (start % interval != 0) {
        throw std::invalid_argument("backtest: start must be aligned to the bar interval");
    }
    if (lambda_override && !(*lambda_override >= 0.0 && *lambda_override <= 1.0)) {
        throw std::invalid_argument("backtest: lambda override must lie in [0, 1]");
    }
    rebalance.validate();
    costs.validate();
}

namespace {

struct Period {
    Timestamp start;
    Timestamp end;
};

std::vector<Period> month_periods(Timestamp start, Timestamp end) {
    std::vector<Period> out;
    Timestamp s = start;
    while (s < end) {
        const Timestamp e = std::min(month_start(next_month(year_month_of(s))), end);
        out.push_back({s, e});
        s = e;
    }
    return out;
}

/// Lazily computed indicators per symbol, shared across months.
class IndicatorCache {
public:
    explicit IndicatorCache(const Universe& u) : universe_(u) {}

    const IndicatorSeries& momentum_of(const std::string& sym, int lookback) {
        auto& slot = mom_[{sym, lookback}];
        if (!slot) slot = std::make_unique<IndicatorSeries>(momentum(*universe_.find(sym), lookback));
        return *slot;
    }
    const IndicatorSeries& atr_of(const std::string& sym, int window) {
        auto& slot = atr_[{sym, window}];
        if (!slot) slot = std::make_unique<IndicatorSeries>(atr(*universe_.find(sym), window));
        return *slot;
    }

private:
    const Universe& universe_;
    std::map<std::pair<std::string, int>, std::unique_ptr<IndicatorSeries>> mom_;
    std::map<std::pair<std::string, int>, std::unique_ptr<IndicatorSeries>> atr_;
};

/// Live position plus the bookkeeping needed to bill it on close.
struct OpenPosition {
    Position position;
    double mark = 0.0;
    double entry_fee = 0.0;
    double entry_slippage = 0.0;
    double funding = 0.0;
};

struct Slot {
    const Holding* holding = nullptr;
    const PriceSeries* series = nullptr;
    const IndicatorSeries* mom = nullptr;
    const IndicatorSeries* atr = nullptr;
    double size = 0.0;
    std::size_t cursor = 0;
    std::size_t end = 0;  // one past the slot's last bar in the period
    std::optional<OpenPosition> open;
};

}  // namespace

BacktestResult run_backtest(const Universe& universe, const BacktestConfig& cfg) {
    cfg.validate();
    if (universe.series.empty()) throw InsufficientHistory("backtest: universe has no price series");

    RebalanceConfig rc = cfg.rebalance;
    rc.lambda = cfg.effective_lambda();
    RebalanceOptions ro;
    ro.cap_filter = cfg.cap_filter_enabled;
    ro.sharpe_filter = cfg.sharpe_filter_enabled;
    ro.rf_annual = cfg.rf_annual;
    ro.costs = cfg.costs;
    ro.signal = SignalOptions{cfg.trailing_stop_enabled, cfg.intrabar_stops};
    ro.interval = cfg.interval;
    ro.jobs = cfg.jobs;

    {
        const auto warmup = static_cast<Timestamp>(std::max(rc.grid.max_lookback(), rc.grid.atr_window));
        const Timestamp need_from =
            month_start(prev_month(year_month_of(cfg.start))) - warmup * cfg.interval;
        Timestamp first = std::numeric_limits<Timestamp>::max();
        Timestamp last = std::numeric_limits<Timestamp>::min();
        for (const auto& [sym, s] : universe.series) {
            if (s.empty()) continue;
            first = std::min(first, s.bars().front().timestamp);
            last = std::max(last, s.bars().back().timestamp);
        }
        if (first > need_from) {
            throw InsufficientHistory("backtest: data starts at " + std::to_string(first) +
                                      " but the first rebalance needs history from " +
                                      std::to_string(need_from));
        }
        if (last < cfg.end - cfg.interval) {
            throw InsufficientHistory("backtest: data ends at " + std::to_string(last) +
                                      " before the backtest end " + std::to_string(cfg.end));
        }
    }

    BacktestResult result;
    IndicatorCache indicators(universe);
    const auto periods = month_periods(cfg.start, cfg.end);
    const auto& costs = cfg.costs;
    double balance = cfg.initial_balance;
    result.equity.push_back({cfg.start - cfg.interval, balance});

    auto next_record = [&](const RebalanceRecord& prev, Timestamp at) {
        if (cfg.reoptimize_enabled) return rebalance(universe, at, balance, rc, ro);
        RebalanceRecord rec;
        rec.month = year_month_of(at);
        rec.rebalance_time = at;
        rec.mode = RebalanceMode::Carried;
        rec.balance = balance;
        rec.optimization_window = prev.optimization_window;
        rec.portfolio = prev.portfolio;
        rec.portfolio.month = rec.month;
        rec.portfolio.rebalance_time = at;
        rec.note = "parameters and selection carried from " + format_year_month(prev.month);
        return rec;
    };

    RebalanceRecord current = rebalance(universe, periods.front().start, balance, rc, ro);
    std::map<std::string, OpenPosition> carried;

    for (std::size_t m = 0; m < periods.size() && !result.bankrupt; ++m) {
        const auto& period = periods[m];
        const bool has_next = m + 1 < periods.size();
        current.balance = balance;
        const double month_balance = balance;
        result.rebalances.push_back(current);
        const MonthlyPortfolio& pf = result.rebalances.back().portfolio;

        std::vector<Slot> slots;
        for (const auto* leg : {&pf.longs, &pf.shorts}) {
            for (const auto& h : *leg) {
                const auto* series = universe.find(h.symbol);
                if (!series) continue;
                Slot s;
                s.holding = &h;
                s.series = series;
                s.mom = &indicators.momentum_of(h.symbol, h.params.lookback);
                s.atr = &indicators.atr_of(h.symbol, h.params.atr_window);
                s.size = h.weight * month_balance;
                s.cursor = series->lower_bound(period.start);
                s.end = series->lower_bound(period.end);
                if (auto it = carried.find(h.symbol);
                    it != carried.end() && it->second.position.side == h.side) {
                    s.open = std::move(it->second);
                }
                slots.push_back(std::move(s));
            }
        }
        carried.clear();

        std::optional<RebalanceRecord> upcoming;
        const Timestamp last_ts = period.start + (period.end - period.start - 1) / cfg.interval * cfg.interval;

        for (Timestamp ts = period.start; ts < period.end; ts += cfg.interval) {
            const bool timeline_last = ts == last_ts;
            if (timeline_last && has_next) upcoming = next_record(current, periods[m + 1].start);

            for (auto& slot : slots) {
                const auto& series = *slot.series;
                while (slot.cursor < slot.end && series[slot.cursor].timestamp < ts) ++slot.cursor;
                if (slot.cursor >= slot.end || series[slot.cursor].timestamp != ts) continue;

                const std::size_t i = slot.cursor++;
                const Bar& bar = series[i];
                const bool slot_last = slot.cursor == slot.end;
                const Holding& h = *slot.holding;
                const SideMode mode = h.side == Side::Long ? SideMode::LongOnly : SideMode::ShortOnly;
                const double exit_sign = side_sign(h.side);

                if (slot.open) {
                    auto& op = *slot.open;
                    const double f = funding_between(op.position.side, op.position.size,
                                                     op.position.symbol, series[i - 1].timestamp,
                                                     bar.timestamp, costs);
                    op.funding += f;
                    balance -= f;
                }

                StepResult r;
                const auto& mom = (*slot.mom)[i];
                const auto& atr_v = (*slot.atr)[i];
                if (slot.open || (mom.defined && atr_v.defined)) {
                    std::optional<Position> state;
                    if (slot.open) state = slot.open->position;
                    r = step(state, h.symbol, bar, mom, atr_v, h.params, mode, slot.size, ro.signal);
                }

                TraceEntry te;
                if (cfg.record_trace) {
                    te.timestamp = bar.timestamp;
                    te.symbol = h.symbol;
                    te.event = r.event;
                    if (r.position) {
                        te.signal_side = r.position->side == Side::Long ? 1 : -1;
                        te.stop = r.position->stop;
                    } else {
                        te.stop = std::numeric_limits<double>::quiet_NaN();
                    }
                }

                auto close_out = [&](double exit_price, bool forced) {
                    auto& op = *slot.open;
                    const auto& p = op.position;
                    const double qty = p.quantity();
                    const double exit_notional = qty * exit_price;
                    const double exit_fee = fee(exit_notional, costs);
                    const double exit_slip = slippage(exit_notional, bar, cfg.interval, costs);
                    balance -= exit_fee + exit_slip;
                    TradeRecord t;
                    t.symbol = p.symbol;
                    t.side = p.side;
                    t.entry_time = p.entry_time;
                    t.entry_price = p.entry_price;
                    t.exit_time = bar.timestamp;
                    t.exit_price = exit_price;
                    t.size = p.size;
                    t.gross_pnl = gross_pnl(p.side, p.size, p.entry_price, exit_price);
                    t.fee_cost = op.entry_fee + exit_fee;
                    t.slippage_cost = op.entry_slippage + exit_slip;
                    t.funding_cost = op.funding;
                    t.forced = forced;
                    t.finalize();
                    result.ledger.push_back(std::move(t));
                    slot.open.reset();
                };

                if (slot.open) {
                    auto& op = *slot.open;
                    const double mark = r.closed ? r.closed->exit_price : bar.close;
                    balance += exit_sign * op.position.quantity() * (mark - op.mark);
                    op.mark = mark;
                }

                if (r.closed) {
                    close_out(r.closed->exit_price, false);
                } else if (r.event == StepEvent::Entry) {
                    if (!slot_last) {
                        OpenPosition op;
                        op.position = *r.position;
                        op.mark = bar.close;
                        op.entry_fee = fee(op.position.size, costs);
                        op.entry_slippage = slippage(op.position.size, bar, cfg.interval, costs);
                        balance -= op.entry_fee + op.entry_slippage;
                        slot.open = std::move(op);
                    }
                } else if (slot.open) {
                    slot.open->position = *r.position;
                }

                if (slot_last && slot.open) {
                    const Holding* next = upcoming ? upcoming->portfolio.find(h.symbol) : nullptr;
                    const bool carry = cfg.carry_positions && timeline_last && next &&
                                       next->side == h.side;
                    if (carry) {
                        carried.emplace(h.symbol, *slot.open);
                    } else {
                        close_out(bar.close, true);
                    }
                }

                if (cfg.record_trace) {
                    if (slot.open) {
                        te.open = slot.open->position;
                        te.entry_fee = slot.open->entry_fee;
                        te.entry_slippage = slot.open->entry_slippage;
                    }
                    result.trace.push_back(std::move(te));
                }
            }

            result.equity.push_back({ts, balance});
            if (!(balance > 0.0)) {
                result.bankrupt = true;
                break;
            }
        }

        if (upcoming) current = std::move(*upcoming);
    }
    return result;
}

AblationVariant parse_ablation_variant(std::string_view name) {
    for (auto v : all_ablation_variants()) {
        if (to_string(v) == name) return v;
    }
    throw std::invalid_argument("unknown ablation variant '" + std::string(name) + "'");
}

std::string_view to_string(AblationVariant v) {
    switch (v) {
        case AblationVariant::Full: return "full";
        case AblationVariant::NoTrailingStop: return "no_trailing_stop";
        case AblationVariant::NoCapFilter: return "no_cap_filter";
        case AblationVariant::NoSharpeFilter: return "no_sharpe_filter";
        case AblationVariant::SymmetricAllocation: return "symmetric_allocation";
        case AblationVariant::FixedParams: return "fixed_params";
    }
    return "unknown";
}

std::vector<AblationVariant> all_ablation_variants() {
    return {AblationVariant::Full,           AblationVariant::NoTrailingStop,
            AblationVariant::NoCapFilter,    AblationVariant::NoSharpeFilter,
            AblationVariant::SymmetricAllocation, AblationVariant::FixedParams};
}

BacktestConfig ablation_config(const BacktestConfig& base, AblationVariant variant) {
    BacktestConfig cfg = base;
    switch (variant) {
        case AblationVariant::Full: break;
        case AblationVariant::NoTrailingStop: cfg.trailing_stop_enabled = false; break;
        case AblationVariant::NoCapFilter: cfg.cap_filter_enabled = false; break;
        case AblationVariant::NoSharpeFilter: cfg.sharpe_filter_enabled = false; break;
        case AblationVariant::SymmetricAllocation: cfg.lambda_override = 0.5; break;
        case AblationVariant::FixedParams: cfg.reoptimize_enabled = false; break;
    }
    return cfg;
}

}  // namespace adaptivetrend
