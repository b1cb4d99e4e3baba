#include "adaptivetrend/rebalancer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "adaptivetrend/indicators.h"
#include "adaptivetrend/parallel.h"

namespace adaptivetrend {

void ParamGrid::validate() const {
    if (theta_entry.empty() || theta_entry_short.empty() || alpha.empty() || lookback.empty()) {
        throw std::invalid_argument("grid: every axis needs at least one value");
    }
    for (double a : alpha) {
        if (!(a > 0.0)) throw std::invalid_argument("grid.alpha values must be > 0");
    }
    for (double t : theta_entry_short) {
        if (!(t > 0.0)) throw std::invalid_argument("grid.theta_entry_short values must be > 0");
    }
    for (int l : lookback) {
        if (l < 1) throw std::invalid_argument("grid.lookback values must be >= 1");
    }
    if (atr_window < 1) throw std::invalid_argument("grid.atr_window must be >= 1");
}

int ParamGrid::max_lookback() const {
    return lookback.empty() ? 0 : *std::max_element(lookback.begin(), lookback.end());
}

void RebalanceConfig::validate() const {
    if (k_long < 1 || k_short < 1) throw std::invalid_argument("rebalance.k_long/k_short must be >= 1");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("rebalance.lambda must lie in [0, 1]");
    if (std::isnan(gamma_long) || std::isnan(gamma_short)) {
        throw std::invalid_argument("rebalance.gamma_long/gamma_short must be numbers");
    }
    if (buffer_bars < 0) throw std::invalid_argument("rebalance.buffer_bars must be >= 0");
    grid.validate();
}

std::optional<UniverseCandidates> filter_universe(const std::vector<MarketCapRecord>& caps,
                                                  Date date, const RebalanceConfig& cfg) {
    std::optional<Date> latest;
    for (const auto& c : caps) {
        if (c.date <= date && (!latest || c.date > *latest)) latest = c.date;
    }
    if (!latest) return std::nullopt;

    std::vector<std::pair<double, std::string>> ranked;
    for (const auto& c : caps) {
        if (c.date == *latest) ranked.emplace_back(c.cap, c.symbol);
    }

    UniverseCandidates out;
    out.as_of = *latest;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const auto n_long = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(cfg.k_long));
    for (std::size_t i = 0; i < n_long; ++i) out.longs.push_back(ranked[i].second);

    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    const auto n_short = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(cfg.k_short));
    for (std::size_t i = 0; i < n_short; ++i) {
        const auto& sym = ranked[i].second;
        if (std::find(out.longs.begin(), out.longs.end(), sym) == out.longs.end()) {
            out.shorts.push_back(sym);
        }
    }
    return out;
}

OptimizationResult optimize_params(const PriceSeries& series, Side side, Window window,
                                   const ParamGrid& grid, const OptimizeOptions& options) {
    grid.validate();
    OptimizationResult result;

    auto thetas = side == Side::Long ? grid.theta_entry : grid.theta_entry_short;
    auto alphas = grid.alpha;
    auto lookbacks = grid.lookback;
    std::sort(thetas.begin(), thetas.end());
    std::sort(alphas.begin(), alphas.end());
    std::sort(lookbacks.begin(), lookbacks.end());

    const int max_l = lookbacks.back();
    const auto warmup = static_cast<Timestamp>(std::max(max_l, grid.atr_window)) * series.interval();
    if (series.empty() || series[0].timestamp > window.start - warmup) {
        result.excluded_reason = "insufficient history before optimization window";
        return result;
    }
    const auto n_bars = series.lower_bound(window.end) - series.lower_bound(window.start);
    if (n_bars < 2 * static_cast<std::size_t>(max_l)) {
        result.excluded_reason = "optimization window has " + std::to_string(n_bars) +
                                 " bars, needs " + std::to_string(2 * max_l);
        return result;
    }

    const auto atr_values = atr(series, grid.atr_window);
    std::map<int, IndicatorSeries> mom_by_lookback;
    for (int l : lookbacks) mom_by_lookback.emplace(l, momentum(series, l));

    const SideMode mode = side == Side::Long ? SideMode::LongOnly : SideMode::ShortOnly;
    RunOptions run{options.notional, options.costs, options.signal};
    const double bpy = bars_per_year(series.interval());
    constexpr double kOff = std::numeric_limits<double>::infinity();

    for (double theta : thetas) {
        for (double alpha : alphas) {
            for (int l : lookbacks) {
                StrategyParams p;
                p.theta_entry = side == Side::Long ? theta : kOff;
                p.theta_entry_short = side == Side::Short ? theta : kOff;
                p.alpha = alpha;
                p.lookback = l;
                p.atr_window = grid.atr_window;
                const auto res = run_single_asset(series, mom_by_lookback.at(l), atr_values, p, mode,
                                                  window, run);
                ++result.cells_evaluated;
                if (res.ledger.empty()) continue;
                const auto returns = res.net_returns();
                const auto sr = rolling_sharpe(returns, options.rf_annual, bpy);
                if (!sr) continue;
                if (!result.sharpe || *sr > *result.sharpe) {
                    result.sharpe = sr;
                    result.params = p;
                    result.trades = res.ledger.size();
                }
            }
        }
    }
    return result;
}

double MonthlyPortfolio::long_weight_sum() const {
    double s = 0.0;
    for (const auto& h : longs) s += h.weight;
    return s;
}

double MonthlyPortfolio::short_weight_sum() const {
    double s = 0.0;
    for (const auto& h : shorts) s += h.weight;
    return s;
}

const Holding* MonthlyPortfolio::find(const std::string& symbol) const {
    for (const auto* leg : {&longs, &shorts}) {
        for (const auto& h : *leg) {
            if (h.symbol == symbol) return &h;
        }
    }
    return nullptr;
}

MonthlyPortfolio select_and_allocate(const std::vector<CandidateEvaluation>& long_candidates,
                                     const std::vector<CandidateEvaluation>& short_candidates,
                                     const RebalanceConfig& cfg, const SelectionOptions& options) {
    const double inf = std::numeric_limits<double>::infinity();
    const double gamma_l = options.sharpe_filter ? cfg.gamma_long : -inf;
    const double gamma_s = options.sharpe_filter ? cfg.gamma_short : -inf;

    auto passes = [](const CandidateEvaluation& c, double gamma) {
        return c.params && c.sharpe && *c.sharpe >= gamma;
    };
    std::map<std::string, double> short_margin;
    for (const auto& c : short_candidates) {
        if (passes(c, gamma_s)) short_margin[c.symbol] = *c.sharpe - gamma_s;
    }
    std::map<std::string, double> long_margin;
    for (const auto& c : long_candidates) {
        if (passes(c, gamma_l)) long_margin[c.symbol] = *c.sharpe - gamma_l;
    }

    MonthlyPortfolio pf;
    pf.lambda = cfg.lambda;
    for (const auto& c : long_candidates) {
        if (!long_margin.contains(c.symbol)) continue;
        auto it = short_margin.find(c.symbol);
        if (it != short_margin.end() && it->second > long_margin[c.symbol]) continue;
        pf.longs.push_back({c.symbol, Side::Long, *c.params, 0.0, *c.sharpe});
    }
    for (const auto& c : short_candidates) {
        if (!short_margin.contains(c.symbol)) continue;
        auto it = long_margin.find(c.symbol);
        if (it != long_margin.end() && it->second >= short_margin[c.symbol]) continue;
        pf.shorts.push_back({c.symbol, Side::Short, *c.params, 0.0, *c.sharpe});
    }

    const double long_share = cfg.lambda;
    const double short_share = 1.0 - cfg.lambda;
    // A zero-share leg holds nothing; positions must have positive size.
    if (long_share <= 0.0) pf.longs.clear();
    if (short_share <= 0.0) pf.shorts.clear();
    for (auto& h : pf.longs) h.weight = long_share / static_cast<double>(pf.longs.size());
    for (auto& h : pf.shorts) h.weight = short_share / static_cast<double>(pf.shorts.size());

    const bool has_l = !pf.longs.empty();
    const bool has_s = !pf.shorts.empty();
    if (has_l && has_s) {
        pf.cash_weight = 0.0;
    } else if (has_l) {
        pf.cash_weight = short_share;
    } else if (has_s) {
        pf.cash_weight = long_share;
    } else {
        pf.cash_weight = 1.0;
    }
    return pf;
}

Window optimization_window(Timestamp rebalance_time, int buffer_bars, std::int64_t interval) {
    const auto ym = year_month_of(rebalance_time);
    return {month_start(prev_month(ym)), rebalance_time - static_cast<Timestamp>(buffer_bars) * interval};
}

RebalanceRecord rebalance(const Universe& universe, Timestamp rebalance_time, double balance,
                          const RebalanceConfig& cfg, const RebalanceOptions& options) {
    RebalanceRecord rec;
    rec.month = year_month_of(rebalance_time);
    rec.rebalance_time = rebalance_time;
    rec.balance = balance;
    rec.optimization_window = optimization_window(rebalance_time, cfg.buffer_bars, options.interval);

    std::vector<std::string> long_syms;
    std::vector<std::string> short_syms;
    if (options.cap_filter) {
        auto cands = filter_universe(universe.caps, date_of(rebalance_time), cfg);
        if (!cands) {
            rec.mode = RebalanceMode::Skipped;
            rec.note = "no market-cap data on or before rebalance date";
            rec.portfolio.month = rec.month;
            rec.portfolio.rebalance_time = rebalance_time;
            rec.portfolio.lambda = cfg.lambda;
            return rec;
        }
        long_syms = std::move(cands->longs);
        short_syms = std::move(cands->shorts);
    } else {
        for (const auto& [sym, s] : universe.series) {
            long_syms.push_back(sym);
            short_syms.push_back(sym);
        }
    }
    if (cfg.lambda <= 0.0) long_syms.clear();
    if (cfg.lambda >= 1.0) short_syms.clear();

    struct Task {
        std::string symbol;
        Side side;
        double notional;
    };
    std::vector<Task> tasks;
    for (const auto& s : long_syms) {
        tasks.push_back({s, Side::Long, balance * cfg.lambda / cfg.k_long});
    }
    for (const auto& s : short_syms) {
        tasks.push_back({s, Side::Short, balance * (1.0 - cfg.lambda) / cfg.k_short});
    }

    std::vector<CandidateEvaluation> evals(tasks.size());
    parallel_for(tasks.size(), options.jobs, [&](std::size_t i) {
        const auto& task = tasks[i];
        auto& ev = evals[i];
        ev.symbol = task.symbol;
        ev.side = task.side;
        const auto* series = universe.find(task.symbol);
        if (!series) {
            ev.note = "no price series";
            return;
        }
        OptimizeOptions opt{task.notional, options.rf_annual, options.costs, options.signal};
        auto res = optimize_params(*series, task.side, rec.optimization_window, cfg.grid, opt);
        ev.params = res.params;
        ev.sharpe = res.sharpe;
        ev.trades = res.trades;
        if (!res.excluded_reason.empty()) {
            ev.note = res.excluded_reason;
        } else if (!res.sharpe) {
            ev.note = "no trades in optimization window";
        }
    });
    for (auto& ev : evals) {
        (ev.side == Side::Long ? rec.long_candidates : rec.short_candidates).push_back(std::move(ev));
    }

    rec.portfolio = select_and_allocate(rec.long_candidates, rec.short_candidates, cfg,
                                        SelectionOptions{options.sharpe_filter});
    rec.portfolio.month = rec.month;
    rec.portfolio.rebalance_time = rebalance_time;
    return rec;
}

std::string_view to_string(RebalanceMode mode) {
    switch (mode) {
        case RebalanceMode::Optimized: return "optimized";
        case RebalanceMode::Carried: return "carried";
        case RebalanceMode::Skipped: return "skipped";
    }
    return "unknown";
}

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json params_json(const StrategyParams& p) {
    return {{"theta_entry", number_or_null(p.theta_entry)},
            {"theta_entry_short", number_or_null(p.theta_entry_short)},
            {"alpha", p.alpha},
            {"lookback", p.lookback},
            {"atr_window", p.atr_window}};
}

nlohmann::json candidate_json(const CandidateEvaluation& c) {
    nlohmann::json j{{"symbol", c.symbol}, {"trades", c.trades}};
    j["params"] = c.params ? params_json(*c.params) : nlohmann::json(nullptr);
    j["sharpe"] = c.sharpe ? nlohmann::json(*c.sharpe) : nlohmann::json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

nlohmann::json holding_json(const Holding& h) {
    return {{"symbol", h.symbol}, {"weight", h.weight}, {"sharpe", h.sharpe},
            {"params", params_json(h.params)}};
}

}  // namespace

std::string rebalance_record_json(const RebalanceRecord& r) {
    nlohmann::json j;
    j["month"] = format_year_month(r.month);
    j["rebalance_ts"] = r.rebalance_time;
    j["mode"] = to_string(r.mode);
    j["balance"] = r.balance;
    j["optimization_window"] = {r.optimization_window.start, r.optimization_window.end};
    auto& lc = j["long_candidates"] = nlohmann::json::array();
    for (const auto& c : r.long_candidates) lc.push_back(candidate_json(c));
    auto& sc = j["short_candidates"] = nlohmann::json::array();
    for (const auto& c : r.short_candidates) sc.push_back(candidate_json(c));
    auto& longs = j["longs"] = nlohmann::json::array();
    for (const auto& h : r.portfolio.longs) longs.push_back(holding_json(h));
    auto& shorts = j["shorts"] = nlohmann::json::array();
    for (const auto& h : r.portfolio.shorts) shorts.push_back(holding_json(h));
    j["lambda"] = r.portfolio.lambda;
    j["cash_weight"] = r.portfolio.cash_weight;
    if (!r.note.empty()) j["note"] = r.note;
    return j.dump();
}

}  // namespace adaptivetrend
