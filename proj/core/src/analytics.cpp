#include "adaptivetrend/analytics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "adaptivetrend/indicators.h"
#include "adaptivetrend/parallel.h"
#include "adaptivetrend/pcg.h"

namespace adaptivetrend {

namespace {

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_stdev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double geometric_annual(std::span<const double> returns, double bars_per_year) {
    if (returns.empty()) return 0.0;
    double log_growth = 0.0;
    for (double r : returns) log_growth += std::log1p(r);
    return std::expm1(log_growth * bars_per_year / static_cast<double>(returns.size()));
}

struct TradeStats {
    std::optional<double> win_rate;
    std::optional<double> avg_pnl;
    std::optional<double> profit_factor;
};

TradeStats trade_stats(const std::vector<const TradeRecord*>& trades) {
    TradeStats st;
    if (trades.empty()) return st;
    std::size_t wins = 0;
    double gains = 0.0;
    double losses = 0.0;
    double frac = 0.0;
    for (const auto* t : trades) {
        if (t->net_pnl > 0.0) {
            ++wins;
            gains += t->net_pnl;
        } else if (t->net_pnl < 0.0) {
            losses += t->net_pnl;
        }
        frac += t->net_pnl / t->size;
    }
    const auto n = static_cast<double>(trades.size());
    st.win_rate = static_cast<double>(wins) / n;
    st.avg_pnl = frac / n;
    if (losses < 0.0) st.profit_factor = gains / -losses;
    return st;
}

}  // namespace

double max_drawdown(std::span<const double> equity) {
    double peak = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double v : equity) {
        peak = std::max(peak, v);
        worst = std::min(worst, v / peak - 1.0);
    }
    return worst;
}

MetricsReport compute_metrics(const EquityCurve& equity, const TradeLedger& ledger,
                              double rf_annual, double bars_per_year) {
    if (equity.size() < 2) throw std::invalid_argument("compute_metrics: need at least 2 equity points");
    MetricsReport m;
    const auto returns = equity_returns(equity);
    m.n_bars = returns.size();
    m.ann_return = std::pow(equity.back().balance / equity.front().balance,
                            bars_per_year / static_cast<double>(m.n_bars)) - 1.0;
    m.ann_vol = sample_stdev(returns) * std::sqrt(bars_per_year);
    m.sharpe = rolling_sharpe(returns, rf_annual, bars_per_year);

    const double rf_bar = rf_annual / bars_per_year;
    std::vector<double> downside;
    downside.reserve(returns.size());
    for (double r : returns) downside.push_back(std::min(r - rf_bar, 0.0));
    const double dd = sample_stdev(downside);
    if (dd > 0.0) m.sortino = (mean_of(returns) - rf_bar) / dd * std::sqrt(bars_per_year);

    std::vector<double> balances;
    balances.reserve(equity.size());
    double balance_sum = 0.0;
    for (const auto& p : equity) {
        balances.push_back(p.balance);
        balance_sum += p.balance;
    }
    m.mdd = max_drawdown(balances);
    if (m.mdd < 0.0) m.calmar = m.ann_return / std::fabs(m.mdd);

    std::vector<const TradeRecord*> trades;
    double traded = 0.0;
    for (const auto& t : ledger) {
        trades.push_back(&t);
        traded += t.size + t.size * t.exit_price / t.entry_price;
    }
    m.n_trades = trades.size();
    const auto st = trade_stats(trades);
    m.win_rate = st.win_rate;
    m.avg_trade_pnl = st.avg_pnl;
    m.profit_factor = st.profit_factor;
    const double years = static_cast<double>(m.n_bars) / bars_per_year;
    m.trades_per_month = static_cast<double>(m.n_trades) / (years * 12.0);
    const double avg_balance = balance_sum / static_cast<double>(equity.size());
    m.turnover = traded / avg_balance / years;
    return m;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
    return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

}  // namespace

std::string metrics_json(const MetricsReport& m, const std::string& label) {
    nlohmann::json j{
        {"label", label},
        {"n_bars", m.n_bars},
        {"ann_return", m.ann_return},
        {"ann_vol", m.ann_vol},
        {"sharpe", opt(m.sharpe)},
        {"sortino", opt(m.sortino)},
        {"mdd", m.mdd},
        {"calmar", opt(m.calmar)},
        {"n_trades", m.n_trades},
        {"win_rate", opt(m.win_rate)},
        {"avg_trade_pnl", opt(m.avg_trade_pnl)},
        {"profit_factor", opt(m.profit_factor)},
        {"trades_per_month", m.trades_per_month},
        {"turnover", m.turnover},
    };
    return j.dump();
}

std::vector<std::string> metrics_columns() {
    return {"ann_return", "ann_vol",  "sharpe",        "sortino",       "mdd",
            "calmar",     "n_trades", "win_rate",      "avg_trade_pnl", "profit_factor",
            "trades_per_month", "turnover"};
}

std::vector<std::string> metrics_values(const MetricsReport& m) {
    return {format_double(m.ann_return), format_double(m.ann_vol), cell(m.sharpe),
            cell(m.sortino),             format_double(m.mdd),     cell(m.calmar),
            std::to_string(m.n_trades),  cell(m.win_rate),         cell(m.avg_trade_pnl),
            cell(m.profit_factor),       format_double(m.trades_per_month),
            format_double(m.turnover)};
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Bull: return "Bull";
        case Regime::Sideways: return "Sideways";
        case Regime::Bear: return "Bear";
    }
    return "unknown";
}

Regime classify_return(double trailing_return, double threshold) {
    if (trailing_return > threshold) return Regime::Bull;
    if (trailing_return < -threshold) return Regime::Bear;
    return Regime::Sideways;
}

std::vector<RegimeLabel> classify_regimes(const PriceSeries& btc, int window_days, double threshold) {
    if (window_days < 1) throw std::invalid_argument("classify_regimes: window_days must be >= 1");
    const auto lag = static_cast<std::size_t>(window_days * kSecondsPerDay / btc.interval());
    std::vector<RegimeLabel> out(btc.size());
    for (std::size_t t = 0; t < btc.size(); ++t) {
        out[t].timestamp = btc[t].timestamp;
        if (t < lag) continue;
        out[t].regime = classify_return(btc[t].close / btc[t - lag].close - 1.0, threshold);
    }
    return out;
}

std::vector<RegimeReport> regime_metrics(const EquityCurve& equity,
                                         const std::vector<RegimeLabel>& labels,
                                         const TradeLedger& ledger, double rf_annual,
                                         double bars_per_year) {
    std::map<Timestamp, Regime> label_at;
    for (const auto& l : labels) {
        if (l.regime) label_at.emplace(l.timestamp, *l.regime);
    }
    std::map<Regime, std::vector<double>> returns;
    for (std::size_t i = 1; i < equity.size(); ++i) {
        auto it = label_at.find(equity[i].timestamp);
        if (it == label_at.end()) continue;
        returns[it->second].push_back(equity[i].balance / equity[i - 1].balance - 1.0);
    }
    std::map<Regime, std::vector<const TradeRecord*>> trades;
    for (const auto& t : ledger) {
        auto it = label_at.find(t.exit_time);
        if (it != label_at.end()) trades[it->second].push_back(&t);
    }

    std::vector<RegimeReport> out;
    for (Regime r : {Regime::Bull, Regime::Sideways, Regime::Bear}) {
        auto it = returns.find(r);
        if (it == returns.end() || it->second.empty()) continue;
        const auto& rs = it->second;
        RegimeReport rep;
        rep.regime = r;
        rep.n_bars = rs.size();
        rep.ann_return = geometric_annual(rs, bars_per_year);
        rep.sharpe = rolling_sharpe(rs, rf_annual, bars_per_year);
        std::vector<double> path{1.0};
        for (double x : rs) path.push_back(path.back() * (1.0 + x));
        rep.mdd = max_drawdown(path);
        const auto st = trade_stats(trades[r]);
        rep.n_trades = trades[r].size();
        rep.win_rate = st.win_rate;
        rep.avg_trade_pnl = st.avg_pnl;
        out.push_back(rep);
    }
    return out;
}

std::string regime_table_csv(const std::vector<RegimeReport>& reports) {
    const Regime order[] = {Regime::Bull, Regime::Sideways, Regime::Bear};
    auto find = [&](Regime r) -> const RegimeReport* {
        for (const auto& rep : reports) {
            if (rep.regime == r) return &rep;
        }
        return nullptr;
    };
    std::string out = "metric,Bull,Sideways,Bear\n";
    auto row = [&](const char* name, auto getter) {
        out += name;
        for (Regime r : order) {
            out += ',';
            if (const auto* rep = find(r)) out += getter(*rep);
        }
        out += '\n';
    };
    row("ann_return", [](const RegimeReport& r) { return format_double(r.ann_return); });
    row("sharpe", [](const RegimeReport& r) { return cell(r.sharpe); });
    row("mdd", [](const RegimeReport& r) { return format_double(r.mdd); });
    row("win_rate", [](const RegimeReport& r) { return cell(r.win_rate); });
    row("avg_trade_pnl", [](const RegimeReport& r) { return cell(r.avg_trade_pnl); });
    row("n_bars", [](const RegimeReport& r) { return std::to_string(r.n_bars); });
    return out;
}

BootstrapResult bootstrap_sharpe_test(std::span<const double> a, std::span<const double> b,
                                      const BootstrapOptions& options) {
    const std::size_t n = a.size();
    const std::size_t block = options.block_len;
    if (b.size() != n) throw std::invalid_argument("bootstrap: series lengths differ");
    if (block == 0) throw std::invalid_argument("bootstrap: block_len must be >= 1");
    if (n < 2 * block) throw std::invalid_argument("bootstrap: need at least 2 * block_len observations");
    if (options.n_reps == 0) throw std::invalid_argument("bootstrap: n_reps must be >= 1");

    BootstrapResult res;
    res.n_reps = options.n_reps;
    res.block_len = block;
    res.seed = options.seed;

    const auto rf = options.rf_annual;
    const auto bpy = options.bars_per_year;
    const auto sa = rolling_sharpe(a, rf, bpy);
    const auto sb = rolling_sharpe(b, rf, bpy);
    if (!sa || !sb) return res;
    const double d = *sa - *sb;
    res.delta_sr = d;

    constexpr int kMaxRedraws = 10;
    const std::size_t n_blocks = (n + block - 1) / block;
    std::vector<double> centered(options.n_reps);
    std::vector<char> ok(options.n_reps, 0);
    parallel_for(options.n_reps, options.jobs, [&](std::size_t rep) {
        Pcg64 rng(options.seed, rep);
        std::vector<double> ra(n);
        std::vector<double> rb(n);
        for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
            std::size_t k = 0;
            for (std::size_t blk = 0; blk < n_blocks && k < n; ++blk) {
                const auto start = static_cast<std::size_t>(rng.below(n));
                for (std::size_t j = 0; j < block && k < n; ++j, ++k) {
                    const auto idx = (start + j) % n;
                    ra[k] = a[idx];
                    rb[k] = b[idx];
                }
            }
            const auto s1 = rolling_sharpe(ra, rf, bpy);
            const auto s2 = rolling_sharpe(rb, rf, bpy);
            if (s1 && s2) {
                centered[rep] = (*s1 - *s2) - d;
                ok[rep] = 1;
                return;
            }
        }
    });
    if (std::find(ok.begin(), ok.end(), 0) != ok.end()) return res;

    const double thr = std::fabs(d);
    std::size_t upper = 0;
    std::size_t lower = 0;
    for (double c : centered) {
        if (c >= thr) ++upper;
        if (c <= -thr) ++lower;
    }
    const auto reps = static_cast<double>(options.n_reps);
    const double p = 2.0 * std::min(static_cast<double>(upper) / reps, static_cast<double>(lower) / reps);
    res.p_value = std::clamp(p, 0.0, 1.0);
    return res;
}

std::string bootstrap_json(const BootstrapResult& r) {
    nlohmann::json j{{"delta_sr", opt(r.delta_sr)},
                     {"p_value", opt(r.p_value)},
                     {"n_reps", r.n_reps},
                     {"block_len", r.block_len},
                     {"seed", r.seed}};
    return j.dump();
}

}  // namespace adaptivetrend
