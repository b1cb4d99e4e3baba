#include "adaptivetrend/config.h"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "adaptivetrend/market_data.h"

namespace adaptivetrend {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) throw std::invalid_argument("expected a number, got '" + s + "'");
    return v;
}

long long to_int(const std::string& s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& s) {
    const auto v = to_int(s);
    if (v < 0) throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument("expected true/false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw std::invalid_argument("expected a non-empty list");
    return out;
}

std::vector<double> to_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) out.push_back(to_double(item));
    return out;
}

std::vector<int> to_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(static_cast<int>(to_int(item)));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += ',';
        if constexpr (std::is_floating_point_v<T>) {
            out += format_double(x);
        } else {
            out += std::to_string(x);
        }
    }
    return out;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

std::string fmt_time(Timestamp ts) {
    if (ts % kSecondsPerDay == 0) return format_date(date_of(ts));
    return std::to_string(ts);
}

struct Entry {
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {"data.dir", [](RunConfig& c, const std::string& v) { c.data_dir = v; },
         [](const RunConfig& c) { return c.data_dir; }},
        {"data.source",
         [](RunConfig& c, const std::string& v) {
             if (v != "files" && v != "synthetic") throw std::invalid_argument("expected files or synthetic");
             c.data_source = v;
         },
         [](const RunConfig& c) { return c.data_source; }},
        {"data.interval", [](RunConfig& c, const std::string& v) { c.backtest.interval = parse_interval(v); },
         [](const RunConfig& c) { return format_interval(c.backtest.interval); }},

        {"backtest.start",
         [](RunConfig& c, const std::string& v) {
             c.backtest.start = parse_timestamp(v);
             c.start_set = true;
         },
         [](const RunConfig& c) { return fmt_time(c.backtest.start); }},
        {"backtest.end",
         [](RunConfig& c, const std::string& v) {
             c.backtest.end = parse_timestamp(v);
             c.end_set = true;
         },
         [](const RunConfig& c) { return fmt_time(c.backtest.end); }},
        {"backtest.initial_balance", [](RunConfig& c, const std::string& v) { c.backtest.initial_balance = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.initial_balance); }},
        {"backtest.trailing_stop", [](RunConfig& c, const std::string& v) { c.backtest.trailing_stop_enabled = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.trailing_stop_enabled); }},
        {"backtest.cap_filter", [](RunConfig& c, const std::string& v) { c.backtest.cap_filter_enabled = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.cap_filter_enabled); }},
        {"backtest.sharpe_filter", [](RunConfig& c, const std::string& v) { c.backtest.sharpe_filter_enabled = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.sharpe_filter_enabled); }},
        {"backtest.reoptimize", [](RunConfig& c, const std::string& v) { c.backtest.reoptimize_enabled = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.reoptimize_enabled); }},
        {"backtest.intrabar_stops", [](RunConfig& c, const std::string& v) { c.backtest.intrabar_stops = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.intrabar_stops); }},
        {"backtest.carry_positions", [](RunConfig& c, const std::string& v) { c.backtest.carry_positions = to_bool(v); },
         [](const RunConfig& c) { return fmt(c.backtest.carry_positions); }},

        {"rebalance.k_long", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.k_long = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.backtest.rebalance.k_long); }},
        {"rebalance.k_short", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.k_short = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.backtest.rebalance.k_short); }},
        {"rebalance.gamma_long", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.gamma_long = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.rebalance.gamma_long); }},
        {"rebalance.gamma_short", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.gamma_short = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.rebalance.gamma_short); }},
        {"rebalance.lambda", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.lambda = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.rebalance.lambda); }},
        {"rebalance.buffer_bars", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.buffer_bars = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.backtest.rebalance.buffer_bars); }},

        {"grid.theta_entry", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.grid.theta_entry = to_doubles(v); },
         [](const RunConfig& c) { return join(c.backtest.rebalance.grid.theta_entry); }},
        {"grid.theta_entry_short", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.grid.theta_entry_short = to_doubles(v); },
         [](const RunConfig& c) { return join(c.backtest.rebalance.grid.theta_entry_short); }},
        {"grid.alpha", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.grid.alpha = to_doubles(v); },
         [](const RunConfig& c) { return join(c.backtest.rebalance.grid.alpha); }},
        {"grid.lookback", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.grid.lookback = to_ints(v); },
         [](const RunConfig& c) { return join(c.backtest.rebalance.grid.lookback); }},
        {"grid.atr_window", [](RunConfig& c, const std::string& v) { c.backtest.rebalance.grid.atr_window = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.backtest.rebalance.grid.atr_window); }},

        {"cost.taker_fee_bps", [](RunConfig& c, const std::string& v) { c.backtest.costs.taker_fee_bps = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.costs.taker_fee_bps); }},
        {"cost.slip_coeff", [](RunConfig& c, const std::string& v) { c.backtest.costs.slip_coeff = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.costs.slip_coeff); }},
        {"cost.slip_cap_bps", [](RunConfig& c, const std::string& v) { c.backtest.costs.slip_cap_bps = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.costs.slip_cap_bps); }},
        {"cost.funding_rate_per_8h", [](RunConfig& c, const std::string& v) { c.backtest.costs.funding_rate_per_8h = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.costs.funding_rate_per_8h); }},
        {"cost.funding_hours", [](RunConfig& c, const std::string& v) { c.backtest.costs.funding_hours = to_ints(v); },
         [](const RunConfig& c) { return join(c.backtest.costs.funding_hours); }},

        {"analytics.rf", [](RunConfig& c, const std::string& v) { c.backtest.rf_annual = to_double(v); },
         [](const RunConfig& c) { return fmt(c.backtest.rf_annual); }},
        {"analytics.bootstrap_reps", [](RunConfig& c, const std::string& v) { c.bootstrap_reps = to_count(v); },
         [](const RunConfig& c) { return std::to_string(c.bootstrap_reps); }},
        {"analytics.block_len", [](RunConfig& c, const std::string& v) { c.bootstrap_block_len = to_count(v); },
         [](const RunConfig& c) { return std::to_string(c.bootstrap_block_len); }},
        {"analytics.regime_window_days", [](RunConfig& c, const std::string& v) { c.regime_window_days = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.regime_window_days); }},
        {"analytics.regime_threshold", [](RunConfig& c, const std::string& v) { c.regime_threshold = to_double(v); },
         [](const RunConfig& c) { return fmt(c.regime_threshold); }},

        {"benchmarks.vol_target", [](RunConfig& c, const std::string& v) { c.benchmark_defaults.vol_target_annual = to_double(v); },
         [](const RunConfig& c) { return fmt(c.benchmark_defaults.vol_target_annual); }},
        {"benchmarks.universe_size", [](RunConfig& c, const std::string& v) { c.benchmark_defaults.universe_size = to_count(v); },
         [](const RunConfig& c) { return std::to_string(c.benchmark_defaults.universe_size); }},
        {"benchmarks.weight_cap_multiple", [](RunConfig& c, const std::string& v) { c.benchmark_defaults.weight_cap_multiple = to_double(v); },
         [](const RunConfig& c) { return fmt(c.benchmark_defaults.weight_cap_multiple); }},
        {"benchmarks.buy_hold_symbol", [](RunConfig& c, const std::string& v) { c.benchmark_defaults.symbol = v; },
         [](const RunConfig& c) { return c.benchmark_defaults.symbol; }},

        {"engine.jobs", [](RunConfig& c, const std::string& v) { c.backtest.jobs = static_cast<int>(to_int(v)); },
         [](const RunConfig& c) { return std::to_string(c.backtest.jobs); }},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_count(v)); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},

        {"synthetic.n_symbols", [](RunConfig& c, const std::string& v) { c.synthetic.n_symbols = to_count(v); },
         [](const RunConfig& c) { return std::to_string(c.synthetic.n_symbols); }},
        {"synthetic.n_bars", [](RunConfig& c, const std::string& v) { c.synthetic.n_bars = to_count(v); },
         [](const RunConfig& c) { return std::to_string(c.synthetic.n_bars); }},
        {"synthetic.drift", [](RunConfig& c, const std::string& v) { c.synthetic_drift = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synthetic_drift); }},
        {"synthetic.vol", [](RunConfig& c, const std::string& v) { c.synthetic_vol = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synthetic_vol); }},
        {"synthetic.start", [](RunConfig& c, const std::string& v) { c.synthetic.start = parse_timestamp(v); },
         [](const RunConfig& c) { return fmt_time(c.synthetic.start); }},
        {"synthetic.start_price", [](RunConfig& c, const std::string& v) { c.synthetic.start_price = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synthetic.start_price); }},
        {"synthetic.market_correlation", [](RunConfig& c, const std::string& v) { c.synthetic.market_correlation = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synthetic.market_correlation); }},
    };
    return entries;
}

const Entry* find_entry(const std::string& key) {
    for (const auto& e : registry()) {
        if (key == e.key) return &e;
    }
    return nullptr;
}

RunConfig defaults() {
    RunConfig c;
    c.synthetic.n_symbols = 20;
    c.synthetic.n_bars = 2190;
    c.synthetic.market_correlation = 0.3;
    return c;
}

}  // namespace

std::int64_t parse_interval(const std::string& text) {
    const std::string t = trim(text);
    if (t == "1d" || t == "24h") return kSecondsPerDay;
    if (!t.empty() && t.back() == 'h') {
        const auto hours = to_int(t.substr(0, t.size() - 1));
        if (hours < 1 || kSecondsPerDay % (hours * 3600) != 0) {
            throw std::invalid_argument("interval must divide one day, got '" + t + "'");
        }
        return hours * 3600;
    }
    const auto secs = to_int(t);
    if (secs < 300 || kSecondsPerDay % secs != 0) {
        throw std::invalid_argument("interval must be >= 300 s and divide one day, got '" + t + "'");
    }
    return secs;
}

std::string format_interval(std::int64_t seconds) {
    if (seconds == kSecondsPerDay) return "1d";
    if (seconds % 3600 == 0) return std::to_string(seconds / 3600) + "h";
    return std::to_string(seconds);
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto* e = find_entry(key);
    if (!e) throw ConfigError("unknown config key: " + key, {key});
    try {
        e->set(cfg, value);
    } catch (const std::exception& ex) {
        throw ConfigError("invalid value for " + key + ": " + ex.what(), {key});
    }
}

void RunConfig::resolve() {
    synthetic.interval = backtest.interval;
    synthetic.seed = seed;
    synthetic.regimes = {RegimeSegment{synthetic.n_bars, synthetic_drift, synthetic_vol}};
    if (data_source == "synthetic") {
        if (!start_set) backtest.start = month_start(next_month(next_month(year_month_of(synthetic.start))));
        if (!end_set) {
            const Timestamp data_end = synthetic.start + static_cast<Timestamp>(synthetic.n_bars) * backtest.interval;
            backtest.end = month_start(year_month_of(data_end));
        }
        try {
            synthetic.validate();
        } catch (const std::exception& ex) {
            throw ConfigError(std::string("invalid synthetic settings: ") + ex.what(),
                              {"synthetic.n_bars", "synthetic.n_symbols"});
        }
    } else {
        std::vector<std::string> missing;
        if (!start_set) missing.push_back("backtest.start");
        if (!end_set) missing.push_back("backtest.end");
        if (!missing.empty()) {
            std::string msg = "missing required config keys:";
            for (const auto& k : missing) msg += " " + k;
            throw ConfigError(msg, missing);
        }
    }
    try {
        backtest.validate();
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("invalid backtest settings: ") + ex.what(), {});
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg = defaults();
    std::vector<std::string> bad;
    std::string messages;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad.push_back("line " + std::to_string(lineno));
            messages += "\n  line " + std::to_string(lineno) + ": expected key = value";
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set_config_value(cfg, key, value);
        } catch (const ConfigError& e) {
            bad.push_back(key);
            messages += std::string("\n  ") + e.what();
        }
    }
    if (!bad.empty()) throw ConfigError("config errors:" + messages, bad);
    cfg.resolve();
    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::vector<std::pair<std::string, std::string>> config_snapshot(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : registry()) out.emplace_back(e.key, e.get(cfg));
    return out;
}

}  // namespace adaptivetrend
