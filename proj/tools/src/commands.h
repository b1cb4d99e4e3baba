#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "adaptivetrend/config.h"
#include "adaptivetrend/market_data.h"

namespace adaptivetrend::cli {

namespace fs = std::filesystem;

inline constexpr const char* kDataDirEnv = "ADAPTIVETREND_DATA_DIR";

struct RunOptions {
    std::string config_path;
    fs::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

/// Loads the config and applies --seed/--jobs overrides and the data-dir env fallback.
RunConfig load_run_config(const RunOptions& opts);

struct LoadedData {
    Universe universe;
    std::vector<fs::path> inputs;  // files that fed the run, for the manifest
};

/// Generates or loads the universe named by the config, and attaches the
/// per-symbol funding file when present.
LoadedData load_data(RunConfig& cfg);

int cmd_validate_data(const fs::path& dir, std::int64_t interval, std::ostream& out, std::ostream& err);
int cmd_generate(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_backtest(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_benchmarks(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ablation(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunOptions& opts, const std::string& axis, std::ostream& out, std::ostream& err);

struct BootstrapCommand {
    fs::path run_a;
    fs::path run_b;
    std::size_t reps = 10'000;
    std::size_t block_len = 20;
    std::uint64_t seed = 42;
    double rf_annual = 0.045;
    int jobs = 1;
    fs::path out_dir;
};
int cmd_bootstrap(const BootstrapCommand& cmd, std::ostream& out, std::ostream& err);

int cmd_report(const fs::path& out_dir, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit status.
int run(int argc, char** argv);

}  // namespace adaptivetrend::cli
