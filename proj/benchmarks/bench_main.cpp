#include <benchmark/benchmark.h>

#include <vector>

#include "adaptivetrend/analytics.h"
#include "adaptivetrend/backtester.h"
#include "adaptivetrend/indicators.h"
#include "adaptivetrend/pcg.h"
#include "adaptivetrend/rebalancer.h"
#include "adaptivetrend/synthetic.h"

namespace at = adaptivetrend;

namespace {

at::SyntheticSpec spec(std::size_t n_symbols, std::size_t n_bars) {
    at::SyntheticSpec s;
    s.seed = 42;
    s.n_symbols = n_symbols;
    s.n_bars = n_bars;
    s.regimes = {at::RegimeSegment{n_bars, 0.3, 0.8}};
    return s;
}

at::PriceSeries btc(std::size_t n_bars) {
    static const auto u = at::generate_synthetic_universe(spec(1, 20'000));
    const auto& full = u.series.at("BTC").bars();
    return at::PriceSeries("BTC", at::kH6Interval, {full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n_bars)});
}

void BM_Momentum(benchmark::State& state) {
    const auto s = btc(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(at::momentum(s, 12));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Momentum)->Arg(1'000)->Arg(10'000);

void BM_Atr(benchmark::State& state) {
    const auto s = btc(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(at::atr(s, 14));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Atr)->Arg(1'000)->Arg(10'000);

void BM_OptimizeParams(benchmark::State& state) {
    const auto s = btc(600);
    const auto reb = s[480].timestamp;
    const auto w = at::optimization_window(reb, 4, s.interval());
    at::OptimizeOptions opt;
    opt.notional = 50'000;
    opt.costs = at::CostConfig{};
    const at::ParamGrid grid;
    for (auto _ : state) benchmark::DoNotOptimize(at::optimize_params(s, at::Side::Long, w, grid, opt));
}
BENCHMARK(BM_OptimizeParams)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
    at::Pcg64 rng(1, 0);
    std::vector<double> a(2'000);
    std::vector<double> b(2'000);
    for (auto& x : a) x = 0.01 * rng.normal();
    for (auto& x : b) x = 0.01 * rng.normal() + 0.001;
    at::BootstrapOptions o;
    o.n_reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(at::bootstrap_sharpe_test(a, b, o));
}
BENCHMARK(BM_Bootstrap)->Arg(1'000)->Unit(benchmark::kMillisecond);

void BM_Backtest(benchmark::State& state) {
    const auto u = at::generate_synthetic_universe(spec(10, 1'000));
    at::BacktestConfig cfg;
    const auto& s = u.series.at("BTC");
    cfg.start = at::month_start(at::next_month(at::next_month(at::year_month_of(s[0].timestamp))));
    cfg.end = at::month_start(at::year_month_of(s.bars().back().timestamp));
    for (auto _ : state) benchmark::DoNotOptimize(at::run_backtest(u, cfg));
}
BENCHMARK(BM_Backtest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
