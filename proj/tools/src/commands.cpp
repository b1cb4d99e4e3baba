#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <tuple>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaptivetrend/analytics.h"
#include "adaptivetrend/backtester.h"
#include "adaptivetrend/benchmarks.h"
#include "adaptivetrend/synthetic.h"
#include "artifacts.h"

namespace adaptivetrend::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) throw std::invalid_argument("--out is required");
    fs::create_directories(dir);
}

std::vector<fs::path> csv_files(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string strategy_label(const RunConfig& cfg) {
    return "AdaptiveTrend (" + allocation_tag(cfg.backtest.effective_lambda()) + ")";
}

MetricsReport metrics_of(const BacktestResult& r, const RunConfig& cfg) {
    return compute_metrics(r.equity, r.ledger, cfg.backtest.rf_annual, bars_per_year(cfg.backtest.interval));
}

std::string rebalance_log(const BacktestResult& r) {
    std::string out;
    for (const auto& rec : r.rebalances) out += rebalance_record_json(rec) + "\n";
    return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const RunConfig& cfg,
                    const LoadedData& data, Clock::time_point t0) {
    Manifest m;
    m.command = command;
    m.config = &cfg;
    m.inputs = data.inputs;
    m.duration_seconds = seconds_since(t0);
    write_file_atomic(dir / "manifest.json", manifest_json(m));
}

std::vector<std::string> metrics_row(const std::vector<std::string>& lead, const MetricsReport& m) {
    auto row = lead;
    for (auto& v : metrics_values(m)) row.push_back(std::move(v));
    return row;
}

std::vector<std::string> metrics_header(const std::vector<std::string>& lead) {
    auto row = lead;
    for (auto& c : metrics_columns()) row.push_back(std::move(c));
    return row;
}

BacktestConfig scale_to_interval(BacktestConfig cfg, std::int64_t base, std::int64_t tf) {
    const double factor = static_cast<double>(base) / static_cast<double>(tf);
    auto scale = [&](int v) { return std::max(1, static_cast<int>(std::lround(v * factor))); };
    auto& grid = cfg.rebalance.grid;
    for (int& l : grid.lookback) l = scale(l);
    std::sort(grid.lookback.begin(), grid.lookback.end());
    grid.lookback.erase(std::unique(grid.lookback.begin(), grid.lookback.end()), grid.lookback.end());
    grid.atr_window = scale(grid.atr_window);
    if (cfg.rebalance.buffer_bars > 0) cfg.rebalance.buffer_bars = scale(cfg.rebalance.buffer_bars);
    cfg.interval = tf;
    return cfg;
}

std::optional<Universe> universe_for_interval(const RunConfig& cfg, const Universe& base,
                                              std::int64_t tf, std::string& note) {
    const auto base_iv = cfg.backtest.interval;
    if (tf == base_iv) return base;
    if (cfg.data_source == "synthetic") {
        SyntheticSpec spec = cfg.synthetic;
        spec.interval = tf;
        const auto scale = [&](std::size_t bars) {
            return static_cast<std::size_t>(static_cast<std::int64_t>(bars) * base_iv / tf);
        };
        spec.n_bars = scale(spec.n_bars);
        for (auto& seg : spec.regimes) seg.bars = scale(seg.bars);
        spec.n_bars = 0;
        for (const auto& seg : spec.regimes) spec.n_bars += seg.bars;
        return generate_synthetic_universe(spec);
    }
    const fs::path sub = fs::path(cfg.data_dir) / format_interval(tf);
    if (fs::is_directory(sub)) return load_universe(sub, tf);
    if (tf > base_iv && tf % base_iv == 0) return resample(base, tf);
    note = "no " + format_interval(tf) + " data (add " + sub.string() + ")";
    return std::nullopt;
}

}  // namespace

RunConfig load_run_config(const RunOptions& opts) {
    if (opts.config_path.empty()) throw ConfigError("--config is required", {});
    RunConfig cfg = load_config(opts.config_path);
    if (cfg.data_dir.empty()) {
        if (const char* env = std::getenv(kDataDirEnv)) cfg.data_dir = env;
    } else if (fs::path(cfg.data_dir).is_relative()) {
        cfg.data_dir = (fs::path(opts.config_path).parent_path() / cfg.data_dir).lexically_normal().string();
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.jobs) cfg.backtest.jobs = *opts.jobs;
    cfg.resolve();
    return cfg;
}

LoadedData load_data(RunConfig& cfg) {
    LoadedData d;
    if (cfg.data_source == "synthetic") {
        d.universe = generate_synthetic_universe(cfg.synthetic);
        return d;
    }
    if (cfg.data_dir.empty()) {
        throw ConfigError(std::string("data.dir is not set and ") + kDataDirEnv + " is empty", {"data.dir"});
    }
    const fs::path dir = cfg.data_dir;
    if (!fs::is_directory(dir)) throw DataError("data directory not found: " + dir.string());
    d.universe = load_universe(dir, cfg.backtest.interval);
    d.inputs = csv_files(dir);
    if (fs::exists(dir / kFundingRateFile)) {
        cfg.backtest.costs.set_funding_series(load_funding_rates(dir / kFundingRateFile));
    }
    return d;
}

int cmd_validate_data(const fs::path& dir, std::int64_t interval, std::ostream& out, std::ostream& err) {
    std::vector<FileCheck> checks;
    try {
        checks = validate_data_dir(dir, interval);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (checks.empty()) {
        err << "error: no data files found in " << dir.string() << "\n";
        return 1;
    }
    bool ok = true;
    for (const auto& c : checks) {
        if (c.ok) {
            out << c.file << ": ok\n";
        } else {
            std::string_view msg = c.message;
            if (msg.starts_with(c.file + ": ")) msg.remove_prefix(c.file.size() + 2);
            out << c.file << ": FAIL " << msg << "\n";
            ok = false;
        }
    }
    return ok ? 0 : 1;
}

int cmd_generate(const RunOptions& opts, std::ostream& out, std::ostream&) {
    RunConfig cfg = load_run_config(opts);
    ensure_dir(opts.out_dir);
    write_universe(generate_synthetic_universe(cfg.synthetic), opts.out_dir);
    out << "wrote " << cfg.synthetic.n_symbols << " symbols x " << cfg.synthetic.n_bars << " bars to "
        << opts.out_dir.string() << "\n";
    return 0;
}

int cmd_backtest(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    RunConfig cfg = load_run_config(opts);
    ensure_dir(opts.out_dir);
    auto data = load_data(cfg);
    const auto result = run_backtest(data.universe, cfg.backtest);
    const auto metrics = metrics_of(result, cfg);
    const auto& dir = opts.out_dir;

    write_file_atomic(dir / "equity.csv", serialize_equity(result.equity));
    write_file_atomic(dir / "trades.csv", serialize_ledger(result.ledger));
    write_file_atomic(dir / "rebalance_log.jsonl", rebalance_log(result));
    write_file_atomic(dir / "returns.csv", serialize_returns(result.equity));
    write_file_atomic(dir / "metrics.json", metrics_json(metrics, strategy_label(cfg)) + "\n");

    if (const auto* btc = data.universe.find(cfg.benchmark_defaults.symbol)) {
        const auto labels = classify_regimes(*btc, cfg.regime_window_days, cfg.regime_threshold);
        const auto reports = regime_metrics(result.equity, labels, result.ledger, cfg.backtest.rf_annual,
                                            bars_per_year(cfg.backtest.interval));
        write_file_atomic(dir / "regimes.csv", regime_table_csv(reports));
    } else {
        err << "warning: no " << cfg.benchmark_defaults.symbol << " series; regimes.csv not written\n";
    }
    write_manifest(dir, "backtest", cfg, data, t0);

    out << strategy_label(cfg) << ": " << metrics.n_trades << " trades, ann_return "
        << format_double(metrics.ann_return) << ", sharpe "
        << (metrics.sharpe ? format_double(*metrics.sharpe) : "undefined") << ", mdd "
        << format_double(metrics.mdd) << (result.bankrupt ? " (bankrupt)" : "") << "\n";
    return 0;
}

int cmd_benchmarks(const RunOptions& opts, std::ostream& out, std::ostream&) {
    const auto t0 = Clock::now();
    RunConfig cfg = load_run_config(opts);
    ensure_dir(opts.out_dir);
    auto data = load_data(cfg);
    const fs::path eq_dir = opts.out_dir / "benchmark_equity";
    fs::create_directories(eq_dir);

    Table summary;
    summary.header = metrics_header({"label"});
    for (const char* c : {"fee_total", "slippage_total", "funding_total"}) summary.header.emplace_back(c);
    Table weights;
    weights.header = {"label", "month", "symbol", "weight"};

    for (auto spec : default_benchmarks()) {
        spec.vol_target_annual = cfg.benchmark_defaults.vol_target_annual;
        spec.universe_size = cfg.benchmark_defaults.universe_size;
        spec.weight_cap_multiple = cfg.benchmark_defaults.weight_cap_multiple;
        spec.symbol = cfg.benchmark_defaults.symbol;
        const auto r = run_benchmark(spec, data.universe, cfg.backtest);
        auto row = metrics_row({r.label}, r.metrics);
        row.push_back(format_double(r.fee_total));
        row.push_back(format_double(r.slippage_total));
        row.push_back(format_double(r.funding_total));
        summary.rows.push_back(std::move(row));
        for (const auto& m : r.months) {
            for (const auto& [sym, w] : m.weights) {
                weights.rows.push_back({r.label, format_year_month(m.month), sym, format_double(w)});
            }
        }
        write_file_atomic(eq_dir / (r.label + ".csv"), serialize_equity(r.equity));
        out << r.label << ": ann_return " << format_double(r.metrics.ann_return) << "\n";
    }
    write_file_atomic(opts.out_dir / "benchmarks.csv", summary.to_csv());
    write_file_atomic(opts.out_dir / "benchmark_weights.csv", weights.to_csv());
    write_manifest(opts.out_dir, "benchmarks", cfg, data, t0);
    return 0;
}

int cmd_ablation(const RunOptions& opts, std::ostream& out, std::ostream&) {
    const auto t0 = Clock::now();
    RunConfig cfg = load_run_config(opts);
    ensure_dir(opts.out_dir);
    auto data = load_data(cfg);
    const fs::path log_dir = opts.out_dir / "ablation";
    fs::create_directories(log_dir);

    Table t;
    t.header = metrics_header({"variant"});
    t.header.emplace_back("optimized_months");
    for (auto v : all_ablation_variants()) {
        const auto vcfg = ablation_config(cfg.backtest, v);
        const auto r = run_backtest(data.universe, vcfg);
        const auto m = compute_metrics(r.equity, r.ledger, vcfg.rf_annual, bars_per_year(vcfg.interval));
        const auto optimized = std::count_if(r.rebalances.begin(), r.rebalances.end(), [](const auto& rec) {
            return rec.mode == RebalanceMode::Optimized;
        });
        auto row = metrics_row({std::string(to_string(v))}, m);
        row.push_back(std::to_string(optimized));
        t.rows.push_back(std::move(row));
        write_file_atomic(log_dir / (std::string(to_string(v)) + "_rebalance_log.jsonl"), rebalance_log(r));
        out << to_string(v) << ": ann_return " << format_double(m.ann_return) << "\n";
    }
    write_file_atomic(opts.out_dir / "ablation.csv", t.to_csv());
    write_manifest(opts.out_dir, "ablation", cfg, data, t0);
    return 0;
}

int cmd_sweep(const RunOptions& opts, const std::string& axis, std::ostream& out, std::ostream&) {
    if (axis != "alpha_lambda" && axis != "fee_bps" && axis != "timeframe") {
        throw std::invalid_argument("unknown sweep axis '" + axis + "' (expected alpha_lambda, fee_bps or timeframe)");
    }
    const auto t0 = Clock::now();
    RunConfig cfg = load_run_config(opts);
    ensure_dir(opts.out_dir);
    auto data = load_data(cfg);

    auto run = [&](const BacktestConfig& bc, const Universe& u) {
        const auto r = run_backtest(u, bc);
        return compute_metrics(r.equity, r.ledger, bc.rf_annual, bars_per_year(bc.interval));
    };

    Table t;
    if (axis == "alpha_lambda") {
        Table sens;
        sens.header = {"alpha", "lambda", "sharpe"};
        t.header = metrics_header({"alpha", "lambda"});
        for (double lambda : {0.5, 0.7, 0.8}) {
            for (int i = 0; i < 9; ++i) {
                const double alpha = 1.0 + 0.5 * i;
                BacktestConfig bc = cfg.backtest;
                bc.rebalance.lambda = lambda;
                bc.lambda_override.reset();
                bc.rebalance.grid.alpha = {alpha};
                const auto m = run(bc, data.universe);
                t.rows.push_back(metrics_row({format_double(alpha), format_double(lambda)}, m));
                sens.rows.push_back({format_double(alpha), format_double(lambda),
                                     m.sharpe ? format_double(*m.sharpe) : ""});
                out << "alpha " << alpha << " lambda " << lambda << " done\n";
            }
        }
        write_file_atomic(opts.out_dir / "sensitivity.csv", sens.to_csv());
    } else if (axis == "fee_bps") {
        t.header = metrics_header({"fee_bps"});
        for (double bps : {0.0, 4.0, 8.0, 12.0}) {
            BacktestConfig bc = cfg.backtest;
            bc.costs.taker_fee_bps = bps;
            t.rows.push_back(metrics_row({format_double(bps)}, run(bc, data.universe)));
            out << "fee " << bps << " bps done\n";
        }
    } else {
        t.header = metrics_header({"timeframe"});
        t.header.emplace_back("note");
        for (std::int64_t tf : {3600, 14400, 21600, 28800, 43200, 86400}) {
            std::string note;
            const auto u = universe_for_interval(cfg, data.universe, tf, note);
            std::vector<std::string> row;
            if (u) {
                const auto bc = scale_to_interval(cfg.backtest, cfg.backtest.interval, tf);
                try {
                    row = metrics_row({format_interval(tf)}, run(bc, *u));
                } catch (const InsufficientHistory& e) {
                    note = e.what();
                }
            }
            if (row.empty()) {
                row = {format_interval(tf)};
                row.resize(t.header.size() - 1);
            }
            row.push_back(note);
            t.rows.push_back(std::move(row));
            out << "timeframe " << format_interval(tf) << (note.empty() ? " done" : ": " + note) << "\n";
        }
    }
    write_file_atomic(opts.out_dir / ("sweep_" + axis + ".csv"), t.to_csv());
    write_manifest(opts.out_dir, "sweep " + axis, cfg, data, t0);
    return 0;
}

int cmd_bootstrap(const BootstrapCommand& cmd, std::ostream& out, std::ostream& err) {
    auto load = [](const fs::path& p) {
        const fs::path file = fs::is_directory(p) ? p / "returns.csv" : p;
        return parse_returns(read_file(file));
    };
    const auto a = load(cmd.run_a);
    const auto b = load(cmd.run_b);
    if (a.size() != b.size()) {
        err << "error: return series lengths differ (" << a.size() << " vs " << b.size() << ")\n";
        return 1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].first != b[i].first) {
            err << "error: timestamps differ at row " << i + 2 << ": " << a[i].first << " vs " << b[i].first << "\n";
            return 1;
        }
    }
    if (a.size() < 2) {
        err << "error: need at least two returns\n";
        return 1;
    }
    std::vector<double> ra;
    std::vector<double> rb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ra.push_back(a[i].second);
        rb.push_back(b[i].second);
    }
    BootstrapOptions o;
    o.n_reps = cmd.reps;
    o.block_len = cmd.block_len;
    o.seed = cmd.seed;
    o.rf_annual = cmd.rf_annual;
    o.bars_per_year = bars_per_year(a[1].first - a[0].first);
    o.jobs = cmd.jobs;
    const auto res = bootstrap_sharpe_test(ra, rb, o);
    const auto json = bootstrap_json(res) + "\n";
    if (!cmd.out_dir.empty()) {
        ensure_dir(cmd.out_dir);
        write_file_atomic(cmd.out_dir / "bootstrap.json", json);
    }
    out << json;
    return 0;
}

namespace {

std::string cell_or_dash(const std::string& s) { return s.empty() ? "n/a" : s; }

std::string pct(const std::string& s) {
    if (s.empty()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", std::stod(s) * 100.0);
    return buf;
}

std::string num(const std::string& s) {
    if (s.empty()) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", std::stod(s));
    return buf;
}

std::string json_cell(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    if (j[key].is_number_unsigned()) return std::to_string(j[key].get<std::uint64_t>());
    return format_double(j[key].get<double>());
}

void markdown_table(std::string& md, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        md += "|";
        for (const auto& c : cells) md += " " + c + " |";
        md += "\n";
    };
    line(header);
    md += "|";
    for (std::size_t i = 0; i < header.size(); ++i) md += "---|";
    md += "\n";
    for (const auto& r : rows) line(r);
    md += "\n";
}

std::vector<std::string> headline(const std::string& label, const std::function<std::string(const char*)>& get) {
    return {label,          pct(get("ann_return")), num(get("sharpe")),   pct(get("mdd")),
            num(get("calmar")), num(get("sortino")), pct(get("win_rate")), num(get("profit_factor"))};
}

const std::vector<std::string> kHeadlineHeader = {"Strategy", "Ann. Return", "Sharpe", "MDD",
                                                  "Calmar",   "Sortino",     "Win Rate", "Profit Factor"};

}  // namespace

int cmd_report(const fs::path& dir, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(dir)) {
        err << "error: output directory not found: " << dir.string() << "\n";
        return 1;
    }
    std::string md = "# AdaptiveTrend run report\n\n";
    std::vector<std::string> gaps;

    md += "## Main comparison\n\n";
    std::vector<std::vector<std::string>> main_rows;
    if (fs::exists(dir / "metrics.json")) {
        const auto j = nlohmann::json::parse(read_file(dir / "metrics.json"));
        main_rows.push_back(headline(j.value("label", "AdaptiveTrend"),
                                     [&](const char* k) { return json_cell(j, k); }));
    } else {
        gaps.push_back("strategy metrics (run `backtest`)");
    }
    if (fs::exists(dir / "benchmarks.csv")) {
        const auto t = parse_csv_table(read_file(dir / "benchmarks.csv"));
        for (const auto& r : t.rows) {
            main_rows.push_back(headline(r[0], [&](const char* k) {
                const auto c = t.column(k);
                return c ? r[*c] : std::string{};
            }));
        }
    } else {
        gaps.push_back("benchmarks (run `benchmarks`)");
    }
    if (main_rows.empty()) {
        md += "not run\n\n";
    } else {
        markdown_table(md, kHeadlineHeader, main_rows);
    }

    md += "## Regime-conditional performance\n\n";
    if (fs::exists(dir / "regimes.csv")) {
        const auto t = parse_csv_table(read_file(dir / "regimes.csv"));
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : t.rows) {
            const bool as_pct = r[0] == "ann_return" || r[0] == "mdd" || r[0] == "win_rate" || r[0] == "avg_trade_pnl";
            const bool as_int = r[0] == "n_bars";
            std::vector<std::string> cells{r[0]};
            for (std::size_t i = 1; i < r.size(); ++i) {
                cells.push_back(as_int ? cell_or_dash(r[i]) : as_pct ? pct(r[i]) : num(r[i]));
            }
            rows.push_back(std::move(cells));
        }
        markdown_table(md, t.header, rows);
    } else {
        md += "not run\n\n";
        gaps.push_back("regime table");
    }

    md += "## Ablation\n\n";
    if (fs::exists(dir / "ablation.csv")) {
        const auto t = parse_csv_table(read_file(dir / "ablation.csv"));
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : t.rows) {
            rows.push_back(headline(r[0], [&](const char* k) {
                const auto c = t.column(k);
                return c ? r[*c] : std::string{};
            }));
        }
        auto header = kHeadlineHeader;
        header[0] = "Variant";
        markdown_table(md, header, rows);
    } else {
        md += "not run\n\n";
    }

    for (const auto& [file, title, key] : std::vector<std::tuple<std::string, std::string, std::string>>{
             {"sweep_fee_bps.csv", "Cost sensitivity", "fee_bps"},
             {"sweep_timeframe.csv", "Timeframe", "timeframe"}}) {
        md += "## " + title + "\n\n";
        if (!fs::exists(dir / file)) {
            md += "not run\n\n";
            continue;
        }
        const auto t = parse_csv_table(read_file(dir / file));
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : t.rows) {
            rows.push_back(headline(r[0], [&](const char* k) {
                const auto c = t.column(k);
                return c ? r[*c] : std::string{};
            }));
        }
        auto header = kHeadlineHeader;
        header[0] = key;
        markdown_table(md, header, rows);
    }

    md += "## Sensitivity\n\n";
    if (fs::exists(dir / "sweep_alpha_lambda.csv")) {
        const auto t = parse_csv_table(read_file(dir / "sweep_alpha_lambda.csv"));
        Table sens;
        sens.header = {"alpha", "lambda", "sharpe"};
        const auto sc = t.column("sharpe");
        for (const auto& r : t.rows) sens.rows.push_back({r[0], r[1], sc ? r[*sc] : ""});
        write_file_atomic(dir / "sensitivity.csv", sens.to_csv());
        md += "Sharpe by ATR multiplier and long share: `sensitivity.csv`.\n\n";
    } else {
        md += "not run\n\n";
    }

    md += "## Significance\n\n";
    if (fs::exists(dir / "bootstrap.json")) {
        const auto j = nlohmann::json::parse(read_file(dir / "bootstrap.json"));
        markdown_table(md, {"delta_sr", "p_value", "n_reps", "block_len"},
                       {{num(json_cell(j, "delta_sr")), cell_or_dash(json_cell(j, "p_value")),
                         json_cell(j, "n_reps"), json_cell(j, "block_len")}});
    } else {
        md += "significance: not run\n\n";
    }

    std::map<std::string, EquityCurve> curves;
    if (fs::exists(dir / "equity.csv")) curves["AdaptiveTrend"] = parse_equity(read_file(dir / "equity.csv"));
    if (fs::is_directory(dir / "benchmark_equity")) {
        for (const auto& p : csv_files(dir / "benchmark_equity")) {
            curves[p.stem().string()] = parse_equity(read_file(p));
        }
    }
    if (!curves.empty()) {
        std::map<Timestamp, std::map<std::string, double>> by_ts;
        for (const auto& [name, eq] : curves) {
            for (const auto& p : eq) by_ts[p.timestamp][name] = p.balance;
        }
        Table t;
        t.header = {"timestamp"};
        for (const auto& [name, eq] : curves) t.header.push_back(name);
        for (const auto& [ts, vals] : by_ts) {
            std::vector<std::string> row{std::to_string(ts)};
            for (const auto& [name, eq] : curves) {
                auto it = vals.find(name);
                row.push_back(it == vals.end() ? "" : format_double(it->second));
            }
            t.rows.push_back(std::move(row));
        }
        write_file_atomic(dir / "equity_curves.csv", t.to_csv());
        md += "Equity curves: `equity_curves.csv`.\n";
    }

    if (!gaps.empty()) {
        md += "\n## Missing artifacts\n\n";
        for (const auto& g : gaps) md += "- " + g + "\n";
    }
    write_file_atomic(dir / "report.md", md);
    out << "wrote " << (dir / "report.md").string() << "\n";
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"AdaptiveTrend crypto trend-following backtester"};
    app.require_subcommand(1);

    RunOptions opts;
    auto add_common = [&](CLI::App* sub, bool need_out) {
        sub->add_option("--config", opts.config_path, "Config file (key = value)")->required();
        auto* o = sub->add_option("--out", opts.out_dir, "Output directory");
        if (need_out) o->required();
        sub->add_option("--seed", opts.seed, "Override the config seed");
        sub->add_option("--jobs", opts.jobs, "Worker threads");
    };

    fs::path validate_dir;
    std::string validate_interval = "6h";
    auto* validate = app.add_subcommand("validate-data", "Check every CSV in a data directory");
    validate->add_option("dir", validate_dir, "Data directory (default: $" + std::string(kDataDirEnv) + ")");
    validate->add_option("--interval", validate_interval, "Bar interval")->capture_default_str();

    auto* generate = app.add_subcommand("generate", "Write the configured synthetic universe as CSV files");
    add_common(generate, true);
    auto* backtest = app.add_subcommand("backtest", "Run the strategy and write its artifacts");
    add_common(backtest, true);
    auto* benchmarks = app.add_subcommand("benchmarks", "Run the comparison strategies");
    add_common(benchmarks, true);
    auto* ablation = app.add_subcommand("ablation", "Run every ablation variant");
    add_common(ablation, true);

    std::string axis;
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep: alpha_lambda, fee_bps or timeframe");
    add_common(sweep, true);
    sweep->add_option("--axis", axis, "Sweep axis")->required();

    BootstrapCommand boot;
    auto* bootstrap = app.add_subcommand("bootstrap", "Block-bootstrap test of a Sharpe difference");
    bootstrap->add_option("run_a", boot.run_a, "Run directory or returns.csv")->required();
    bootstrap->add_option("run_b", boot.run_b, "Run directory or returns.csv")->required();
    bootstrap->add_option("--reps", boot.reps, "Replicates")->capture_default_str();
    bootstrap->add_option("--block-len", boot.block_len, "Block length")->capture_default_str();
    bootstrap->add_option("--seed", boot.seed, "Random seed")->capture_default_str();
    bootstrap->add_option("--rf", boot.rf_annual, "Annual risk-free rate")->capture_default_str();
    bootstrap->add_option("--jobs", boot.jobs, "Worker threads");
    bootstrap->add_option("--out", boot.out_dir, "Write bootstrap.json here");

    fs::path report_dir;
    auto* report = app.add_subcommand("report", "Render report.md from the artifacts in a directory");
    report->add_option("--out", report_dir, "Artifact directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    try {
        if (*validate) {
            if (validate_dir.empty()) {
                if (const char* env = std::getenv(kDataDirEnv)) validate_dir = env;
            }
            if (validate_dir.empty()) {
                err << "error: no data directory given and " << kDataDirEnv << " is not set\n";
                return 1;
            }
            return cmd_validate_data(validate_dir, parse_interval(validate_interval), out, err);
        }
        if (*generate) return cmd_generate(opts, out, err);
        if (*backtest) return cmd_backtest(opts, out, err);
        if (*benchmarks) return cmd_benchmarks(opts, out, err);
        if (*ablation) return cmd_ablation(opts, out, err);
        if (*sweep) return cmd_sweep(opts, axis, out, err);
        if (*bootstrap) return cmd_bootstrap(boot, out, err);
        if (*report) return cmd_report(report_dir, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace adaptivetrend::cli
