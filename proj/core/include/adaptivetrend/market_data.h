#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptivetrend/time.h"

namespace adaptivetrend {

/// Raised for any malformed or invariant-violating input file.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Bar {
    Timestamp timestamp = 0;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    friend bool operator==(const Bar&, const Bar&) = default;
};

/// Empty string if the bar is valid, otherwise a description of the first violation.
std::string bar_violation(const Bar& bar);

/// Ordered OHLCV bars for one symbol. Immutable after construction by the loaders.
class PriceSeries {
public:
    PriceSeries() = default;
    /// Validates and sorts `bars`; throws DataError on any invariant violation.
    PriceSeries(std::string symbol, std::int64_t interval, std::vector<Bar> bars);

    const std::string& symbol() const { return symbol_; }
    std::int64_t interval() const { return interval_; }
    const std::vector<Bar>& bars() const { return bars_; }
    std::size_t size() const { return bars_.size(); }
    bool empty() const { return bars_.empty(); }
    const Bar& operator[](std::size_t i) const { return bars_[i]; }

    /// First index with timestamp >= ts.
    std::size_t lower_bound(Timestamp ts) const;
    std::optional<std::size_t> index_of(Timestamp ts) const;
    /// Last bar with timestamp <= ts.
    std::optional<std::size_t> last_at_or_before(Timestamp ts) const;

    /// Indices i where bars[i].timestamp - bars[i-1].timestamp > interval.
    const std::vector<std::size_t>& gaps() const { return gaps_; }

    /// Copy restricted to timestamps < end (used for prefix/truncation checks).
    PriceSeries truncated(Timestamp end) const;

private:
    std::string symbol_;
    std::int64_t interval_ = kH6Interval;
    std::vector<Bar> bars_;
    std::vector<std::size_t> gaps_;
};

struct MarketCapRecord {
    std::string symbol;
    Date date{};
    double cap = 0.0;

    friend bool operator==(const MarketCapRecord&, const MarketCapRecord&) = default;
};

/// One row of the optional per-symbol funding-rate file.
struct FundingRateRecord {
    Timestamp timestamp = 0;
    std::string symbol;
    double rate_8h = 0.0;
};

// Funding CSV: `timestamp,symbol,rate_8h`
std::vector<FundingRateRecord> load_funding_rates(const std::filesystem::path& path);
std::vector<FundingRateRecord> parse_funding_rates(const std::string& text);

/// Price series keyed by symbol plus the daily market-cap table.
struct Universe {
    std::map<std::string, PriceSeries> series;
    std::vector<MarketCapRecord> caps;

    const PriceSeries* find(const std::string& symbol) const;
    Universe truncated(Timestamp end) const;
};

/// Aggregates complete buckets of `interval` (a multiple of the series interval).
/// A bucket is labeled by its closing timestamp; incomplete buckets are dropped.
PriceSeries resample(const PriceSeries& series, std::int64_t interval);
Universe resample(const Universe& universe, std::int64_t interval);

// OHLCV CSV: `timestamp,open,high,low,close,volume`
PriceSeries load_price_series(const std::filesystem::path& path, std::int64_t interval,
                              std::string symbol = {});
PriceSeries parse_price_series(const std::string& text, std::int64_t interval, std::string symbol);
std::string serialize_price_series(const PriceSeries& series);

// Market-cap CSV: `date,symbol,market_cap_usd`
std::vector<MarketCapRecord> load_market_caps(const std::filesystem::path& path);
std::vector<MarketCapRecord> parse_market_caps(const std::string& text);
std::string serialize_market_caps(const std::vector<MarketCapRecord>& caps);

inline constexpr const char* kMarketCapFile = "market_caps.csv";
inline constexpr const char* kFundingRateFile = "funding_rates.csv";

/// Loads every `<SYMBOL>.csv` in `dir` as OHLCV plus `market_caps.csv`.
Universe load_universe(const std::filesystem::path& dir, std::int64_t interval);
void write_universe(const Universe& universe, const std::filesystem::path& dir);

/// Outcome of validating one file of a data directory.
struct FileCheck {
    std::string file;
    bool ok = true;
    std::string message;
};

/// Validates every CSV in `dir`. Throws DataError if the directory is unreadable.
std::vector<FileCheck> validate_data_dir(const std::filesystem::path& dir, std::int64_t interval);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temp sibling then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Shortest round-tripping decimal form of `v`.
std::string format_double(double v);

}  // namespace adaptivetrend
