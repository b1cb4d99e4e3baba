#include <gtest/gtest.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "adaptivetrend/market_data.h"
#include "artifacts.h"
#include "commands.h"

namespace at = adaptivetrend;
namespace cli = adaptivetrend::cli;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSmallConfig = R"(data.source = synthetic
synthetic.n_symbols = 5
synthetic.n_bars = 900
rebalance.k_long = 3
rebalance.k_short = 3
rebalance.gamma_long = 0.5
rebalance.gamma_short = 0.5
grid.theta_entry = 0.02,0.05
grid.theta_entry_short = 0.02,0.05
grid.alpha = 2,3
grid.lookback = 4,8
seed = 5
)";

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root_ = fs::temp_directory_path() / (std::string("at_cli_") + info->name());
        fs::remove_all(root_);
        fs::create_directories(root_);
        config_ = root_ / "run.cfg";
        write(config_, kSmallConfig);
    }
    void TearDown() override { fs::remove_all(root_); }

    static void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

    cli::RunOptions opts(const std::string& sub) const {
        cli::RunOptions o;
        o.config_path = config_.string();
        o.out_dir = root_ / sub;
        return o;
    }

    fs::path root_;
    fs::path config_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::size_t data_rows(const fs::path& csv) {
    return cli::parse_csv_table(at::read_file(csv)).rows.size();
}

}  // namespace

TEST_F(CliTest, BacktestWritesArtifactsDeterministically) {
    ASSERT_EQ(cli::cmd_backtest(opts("a"), out_, err_), 0) << err_.str();
    ASSERT_EQ(cli::cmd_backtest(opts("b"), out_, err_), 0) << err_.str();
    for (const char* f : {"equity.csv", "trades.csv", "rebalance_log.jsonl", "returns.csv", "metrics.json",
                          "regimes.csv", "manifest.json"}) {
        EXPECT_TRUE(fs::exists(root_ / "a" / f)) << f;
    }
    for (const char* f : {"equity.csv", "trades.csv", "rebalance_log.jsonl", "returns.csv", "metrics.json"}) {
        EXPECT_EQ(at::read_file(root_ / "a" / f), at::read_file(root_ / "b" / f)) << f;
    }
    const auto m = nlohmann::json::parse(at::read_file(root_ / "a" / "metrics.json"));
    EXPECT_EQ(m["label"], "AdaptiveTrend (70/30)");
    const auto man = nlohmann::json::parse(at::read_file(root_ / "a" / "manifest.json"));
    EXPECT_EQ(man["seed"], 5);
    EXPECT_EQ(man["command"], "backtest");
    EXPECT_TRUE(man.contains("engine_version"));
}

TEST_F(CliTest, SeedOverrideAndAllocationTag) {
    auto o = opts("c");
    o.seed = 6;
    write(config_, std::string(kSmallConfig) + "rebalance.lambda = 0.5\n");
    ASSERT_EQ(cli::cmd_backtest(o, out_, err_), 0) << err_.str();
    const auto m = nlohmann::json::parse(at::read_file(root_ / "c" / "metrics.json"));
    EXPECT_EQ(m["label"], "AdaptiveTrend (50/50)");
    EXPECT_EQ(nlohmann::json::parse(at::read_file(root_ / "c" / "manifest.json"))["seed"], 6);
}

TEST_F(CliTest, GenerateThenBacktestFromFiles) {
    ASSERT_EQ(cli::cmd_generate(opts("data"), out_, err_), 0);
    EXPECT_TRUE(fs::exists(root_ / "data" / "BTC.csv"));
    EXPECT_TRUE(fs::exists(root_ / "data" / "market_caps.csv"));
    ASSERT_EQ(cli::cmd_backtest(opts("synth"), out_, err_), 0);

    const auto synth = cli::load_run_config(opts("x"));
    write(config_, std::string(kSmallConfig) + "data.source = files\ndata.dir = data\nbacktest.start = " +
                       at::format_date(at::date_of(synth.backtest.start)) + "\nbacktest.end = " +
                       at::format_date(at::date_of(synth.backtest.end)) + "\n");
    ASSERT_EQ(cli::cmd_backtest(opts("files"), out_, err_), 0) << err_.str();
    // Text round trip keeps full precision.
    EXPECT_EQ(at::read_file(root_ / "synth" / "equity.csv"), at::read_file(root_ / "files" / "equity.csv"));
    const auto man = nlohmann::json::parse(at::read_file(root_ / "files" / "manifest.json"));
    EXPECT_GE(man["inputs"].size(), 6u);
    EXPECT_EQ(man["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST_F(CliTest, ValidateData) {
    fs::create_directories(root_ / "empty");
    EXPECT_EQ(cli::cmd_validate_data(root_ / "empty", at::kH6Interval, out_, err_), 1);
    EXPECT_NE(err_.str().find("no data files found"), std::string::npos);

    ASSERT_EQ(cli::cmd_generate(opts("data"), out_, err_), 0);
    std::ostringstream good;
    EXPECT_EQ(cli::cmd_validate_data(root_ / "data", at::kH6Interval, good, err_), 0);
    EXPECT_NE(good.str().find("BTC.csv: ok"), std::string::npos);

    auto text = at::read_file(root_ / "data" / "ALT002.csv");
    const auto line2 = text.find('\n', text.find('\n') + 1);
    text.insert(line2 + 1, "1609502400,10,5,9,8,100\n");
    write(root_ / "data" / "ALT002.csv", text);
    std::ostringstream bad;
    EXPECT_EQ(cli::cmd_validate_data(root_ / "data", at::kH6Interval, bad, err_), 1);
    EXPECT_NE(bad.str().find("ALT002.csv: FAIL"), std::string::npos);
    EXPECT_NE(bad.str().find("1609502400"), std::string::npos);
}

TEST_F(CliTest, SweepRowCounts) {
    ASSERT_EQ(cli::cmd_sweep(opts("s"), "fee_bps", out_, err_), 0) << err_.str();
    EXPECT_EQ(data_rows(root_ / "s" / "sweep_fee_bps.csv"), 4u);
    ASSERT_EQ(cli::cmd_sweep(opts("s"), "alpha_lambda", out_, err_), 0) << err_.str();
    EXPECT_EQ(data_rows(root_ / "s" / "sweep_alpha_lambda.csv"), 27u);
    EXPECT_EQ(data_rows(root_ / "s" / "sensitivity.csv"), 27u);
    ASSERT_EQ(cli::cmd_sweep(opts("s"), "timeframe", out_, err_), 0) << err_.str();
    EXPECT_EQ(data_rows(root_ / "s" / "sweep_timeframe.csv"), 6u);
    EXPECT_THROW(cli::cmd_sweep(opts("s"), "nope", out_, err_), std::invalid_argument);
}

TEST_F(CliTest, BootstrapAndReport) {
    ASSERT_EQ(cli::cmd_backtest(opts("r"), out_, err_), 0);
    ASSERT_EQ(cli::cmd_report(root_ / "r", out_, err_), 0);
    auto md = at::read_file(root_ / "r" / "report.md");
    EXPECT_NE(md.find("significance: not run"), std::string::npos);

    ASSERT_EQ(cli::cmd_benchmarks(opts("r"), out_, err_), 0) << err_.str();
    EXPECT_EQ(data_rows(root_ / "r" / "benchmarks.csv"), 5u);
    EXPECT_TRUE(fs::exists(root_ / "r" / "benchmark_equity" / "BTC-BH.csv"));

    cli::BootstrapCommand b;
    b.run_a = root_ / "r";
    b.run_b = root_ / "r" / "returns.csv";
    b.reps = 200;
    b.out_dir = root_ / "r";
    ASSERT_EQ(cli::cmd_bootstrap(b, out_, err_), 0) << err_.str();
    const auto j = nlohmann::json::parse(at::read_file(root_ / "r" / "bootstrap.json"));
    EXPECT_EQ(j["p_value"], 1.0);
    EXPECT_EQ(j["block_len"], 20);
    EXPECT_EQ(j["seed"], 42);

    ASSERT_EQ(cli::cmd_report(root_ / "r", out_, err_), 0);
    md = at::read_file(root_ / "r" / "report.md");
    EXPECT_EQ(md.find("significance: not run"), std::string::npos);
    EXPECT_NE(md.find("TSMOM-1M"), std::string::npos);
}

TEST_F(CliTest, BootstrapRejectsMisalignedRuns) {
    write(root_ / "a.csv", "timestamp,return\n1,0.1\n2,0.2\n");
    write(root_ / "b.csv", "timestamp,return\n1,0.1\n3,0.2\n");
    cli::BootstrapCommand b;
    b.run_a = root_ / "a.csv";
    b.run_b = root_ / "b.csv";
    EXPECT_NE(cli::cmd_bootstrap(b, out_, err_), 0);
}

TEST_F(CliTest, RunExitCodes) {
    write(config_, "data.source = synthetic\nbogus.key = 1\nother = 2\n");
    std::string a0 = "adaptivetrend", a1 = "backtest", a2 = "--config", a3 = config_.string(), a4 = "--out",
                a5 = (root_ / "o").string();
    char* argv[] = {a0.data(), a1.data(), a2.data(), a3.data(), a4.data(), a5.data()};
    testing::internal::CaptureStderr();
    EXPECT_EQ(cli::run(6, argv), 2);
    const auto err = testing::internal::GetCapturedStderr();
    EXPECT_NE(err.find("bogus.key"), std::string::npos);
    EXPECT_NE(err.find("other"), std::string::npos);
}
