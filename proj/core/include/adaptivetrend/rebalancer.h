#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adaptivetrend/cost_model.h"
#include "adaptivetrend/market_data.h"
#include "adaptivetrend/signal_engine.h"
#include "adaptivetrend/trading_types.h"

namespace adaptivetrend {

/// Candidate values searched by the monthly optimizer. The ATR window is fixed.
struct ParamGrid {
    std::vector<double> theta_entry{0.01, 0.02, 0.03, 0.05, 0.08};
    std::vector<double> theta_entry_short{0.01, 0.02, 0.03, 0.05, 0.08};
    std::vector<double> alpha{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    std::vector<int> lookback{4, 8, 12, 20, 28};
    int atr_window = 14;

    void validate() const;
    int max_lookback() const;
};

struct RebalanceConfig {
    int k_long = 15;
    int k_short = 15;
    double gamma_long = 1.3;
    double gamma_short = 1.7;
    double lambda = 0.7;
    ParamGrid grid;
    int buffer_bars = 4;

    void validate() const;
};

struct UniverseCandidates {
    Date as_of{};
    std::vector<std::string> longs;   // by cap, descending
    std::vector<std::string> shorts;  // by cap, ascending
};

/// Ranks symbols by cap on the latest date <= `date` that has any records.
/// Ties break toward the lexicographically smaller symbol. Symbols already in the
/// long set are removed from the short set. nullopt when no cap data exists yet.
std::optional<UniverseCandidates> filter_universe(const std::vector<MarketCapRecord>& caps,
                                                  Date date, const RebalanceConfig& cfg);

struct OptimizeOptions {
    double notional = 1.0;
    double rf_annual = 0.045;
    CostConfig costs = CostConfig::zero();
    SignalOptions signal{};
};

/// Result of the grid search for one symbol and side.
struct OptimizationResult {
    std::optional<StrategyParams> params;
    std::optional<double> sharpe;  // undefined when no cell traded or all cells had zero variance
    std::size_t trades = 0;
    std::size_t cells_evaluated = 0;
    std::string excluded_reason;  // non-empty when the candidate could not be evaluated
};

/// Exhaustive grid search maximizing the Sharpe ratio of the per-bar net return
/// series over `window`. Ties go to the smaller threshold, then smaller alpha,
/// then smaller lookback.
OptimizationResult optimize_params(const PriceSeries& series, Side side, Window window,
                                   const ParamGrid& grid, const OptimizeOptions& options = {});

struct CandidateEvaluation {
    std::string symbol;
    Side side = Side::Long;
    std::optional<StrategyParams> params;
    std::optional<double> sharpe;
    std::size_t trades = 0;
    std::string note;
};

struct Holding {
    std::string symbol;
    Side side = Side::Long;
    StrategyParams params;
    double weight = 0.0;
    double sharpe = 0.0;
};

struct MonthlyPortfolio {
    YearMonth month;
    Timestamp rebalance_time = 0;
    double lambda = 0.7;
    std::vector<Holding> longs;
    std::vector<Holding> shorts;
    double cash_weight = 1.0;

    double long_weight_sum() const;
    double short_weight_sum() const;
    const Holding* find(const std::string& symbol) const;
};

struct SelectionOptions {
    bool sharpe_filter = true;  // false admits any defined Sharpe
};

/// Applies the Sharpe thresholds and splits capital lambda / (1 - lambda) equally
/// within each leg. A symbol passing on both legs keeps the side with the larger
/// margin over its threshold (long on ties). An empty leg's share stays in cash.
MonthlyPortfolio select_and_allocate(const std::vector<CandidateEvaluation>& long_candidates,
                                     const std::vector<CandidateEvaluation>& short_candidates,
                                     const RebalanceConfig& cfg, const SelectionOptions& options = {});

enum class RebalanceMode { Optimized, Carried, Skipped };

/// One month's audit record.
struct RebalanceRecord {
    YearMonth month;
    Timestamp rebalance_time = 0;
    RebalanceMode mode = RebalanceMode::Optimized;
    double balance = 0.0;
    Window optimization_window;
    std::vector<CandidateEvaluation> long_candidates;
    std::vector<CandidateEvaluation> short_candidates;
    MonthlyPortfolio portfolio;
    std::string note;
};

struct RebalanceOptions {
    bool cap_filter = true;
    bool sharpe_filter = true;
    double rf_annual = 0.045;
    CostConfig costs;
    SignalOptions signal{};
    std::int64_t interval = kH6Interval;
    int jobs = 1;
};

/// Window the optimizer sees for a rebalance at `rebalance_time`: from the start of
/// the preceding calendar month up to buffer_bars intervals before the rebalance.
Window optimization_window(Timestamp rebalance_time, int buffer_bars, std::int64_t interval);

/// Full monthly pipeline: candidates, per-candidate grid search, selection.
/// `balance` only sizes the notional used to price slippage during optimization.
RebalanceRecord rebalance(const Universe& universe, Timestamp rebalance_time, double balance,
                          const RebalanceConfig& cfg, const RebalanceOptions& options);

/// One JSON object (single line) per record.
std::string rebalance_record_json(const RebalanceRecord& record);

std::string_view to_string(RebalanceMode mode);

}  // namespace adaptivetrend
