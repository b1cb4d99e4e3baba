#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adaptivetrend/analytics.h"
#include "adaptivetrend/backtester.h"
#include "adaptivetrend/benchmarks.h"
#include "adaptivetrend/synthetic.h"

namespace adaptivetrend {

/// Raised for config files with unknown keys or invalid values; the message lists
/// every offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::vector<std::string> keys)
        : std::runtime_error(message), keys_(std::move(keys)) {}
    const std::vector<std::string>& keys() const { return keys_; }

private:
    std::vector<std::string> keys_;
};

/// Everything one CLI run needs.
///
/// File format: one `key = value` per line, `#` starts a comment, keys are dotted
/// (`rebalance.lambda`). Lists are comma separated. Every key has a default.
struct RunConfig {
    std::string data_dir;
    std::string data_source = "files";  // files | synthetic
    BacktestConfig backtest;
    bool start_set = false;
    bool end_set = false;
    std::uint64_t seed = 42;
    std::size_t bootstrap_reps = 10'000;
    std::size_t bootstrap_block_len = 20;
    int regime_window_days = 60;
    double regime_threshold = 0.15;
    SyntheticSpec synthetic;
    double synthetic_drift = 0.30;
    double synthetic_vol = 0.80;
    BenchmarkSpec benchmark_defaults;

    /// Fills the synthetic spec from the scalar keys and derives start/end for
    /// synthetic runs when they were not given. Throws ConfigError.
    void resolve();
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Sets one key; throws ConfigError for unknown keys or bad values.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_snapshot(const RunConfig& cfg);

/// "1h", "4h", "6h", "8h", "12h", "1d"/"24h", or plain seconds.
std::int64_t parse_interval(const std::string& text);
std::string format_interval(std::int64_t seconds);

}  // namespace adaptivetrend
