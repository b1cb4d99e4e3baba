#include "adaptivetrend/market_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace adaptivetrend {

namespace {

constexpr const char* kOhlcvHeader = "timestamp,open,high,low,close,volume";
constexpr const char* kCapHeader = "date,symbol,market_cap_usd";
constexpr const char* kFundingHeader = "timestamp,symbol,rate_8h";

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

// Yields (1-based line number, line) skipping blank trailing lines; strips CR.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::string_view rest(text);
    std::size_t line_no = 0;
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        out.emplace_back(line_no, line);
    }
    return out;
}

[[noreturn]] void fail_row(std::size_t row, const std::string& what) {
    throw DataError("row " + std::to_string(row) + ": " + what);
}

double parse_double(std::string_view s, std::size_t row, const char* column) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        fail_row(row, std::string("cannot parse ") + column + " '" + std::string(s) + "'");
    }
    return v;
}

std::int64_t parse_int64(std::string_view s, std::size_t row, const char* column) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail_row(row, std::string("cannot parse ") + column + " '" + std::string(s) + "'");
    }
    return v;
}

void expect_header(const std::vector<std::pair<std::size_t, std::string_view>>& lines,
                   const char* header) {
    if (lines.empty()) throw DataError("empty file (expected header '" + std::string(header) + "')");
    if (lines.front().second != header) {
        throw DataError("bad header '" + std::string(lines.front().second) + "', expected '" +
                        header + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string bar_violation(const Bar& b) {
    if (!(b.open > 0.0 && b.high > 0.0 && b.low > 0.0 && b.close > 0.0)) return "non-positive price";
    if (!(b.volume >= 0.0)) return "negative volume";
    if (b.low > b.high) return "low > high";
    if (b.high < std::max(b.open, b.close)) return "high < max(open, close)";
    if (b.low > std::min(b.open, b.close)) return "low > min(open, close)";
    return {};
}

PriceSeries::PriceSeries(std::string symbol, std::int64_t interval, std::vector<Bar> bars)
    : symbol_(std::move(symbol)), interval_(interval), bars_(std::move(bars)) {
    if (interval_ <= 0) throw DataError(symbol_ + ": interval must be positive");
    std::stable_sort(bars_.begin(), bars_.end(),
                     [](const Bar& a, const Bar& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 0; i < bars_.size(); ++i) {
        const auto& b = bars_[i];
        if (auto why = bar_violation(b); !why.empty()) {
            throw DataError(symbol_ + ": bar at timestamp " + std::to_string(b.timestamp) + ": " + why);
        }
        if (i == 0) continue;
        const auto gap = b.timestamp - bars_[i - 1].timestamp;
        if (gap == 0) {
            throw DataError(symbol_ + ": duplicate timestamp " + std::to_string(b.timestamp));
        }
        if (gap % interval_ != 0) {
            throw DataError(symbol_ + ": bar at timestamp " + std::to_string(b.timestamp) +
                            " is off the " + std::to_string(interval_) + "s grid");
        }
        if (gap > interval_) gaps_.push_back(i);
    }
}

std::size_t PriceSeries::lower_bound(Timestamp ts) const {
    return static_cast<std::size_t>(
        std::lower_bound(bars_.begin(), bars_.end(), ts,
                         [](const Bar& b, Timestamp t) { return b.timestamp < t; }) -
        bars_.begin());
}

std::optional<std::size_t> PriceSeries::index_of(Timestamp ts) const {
    const auto i = lower_bound(ts);
    if (i < bars_.size() && bars_[i].timestamp == ts) return i;
    return std::nullopt;
}

std::optional<std::size_t> PriceSeries::last_at_or_before(Timestamp ts) const {
    const auto i = lower_bound(ts + 1);
    if (i == 0) return std::nullopt;
    return i - 1;
}

PriceSeries PriceSeries::truncated(Timestamp end) const {
    PriceSeries out;
    out.symbol_ = symbol_;
    out.interval_ = interval_;
    out.bars_.assign(bars_.begin(), bars_.begin() + static_cast<std::ptrdiff_t>(lower_bound(end)));
    for (auto g : gaps_) {
        if (g < out.bars_.size()) out.gaps_.push_back(g);
    }
    return out;
}

const PriceSeries* Universe::find(const std::string& symbol) const {
    auto it = series.find(symbol);
    return it == series.end() ? nullptr : &it->second;
}

Universe Universe::truncated(Timestamp end) const {
    Universe out;
    for (const auto& [sym, s] : series) out.series.emplace(sym, s.truncated(end));
    for (const auto& c : caps) {
        if (to_timestamp(c.date) < end) out.caps.push_back(c);
    }
    return out;
}

PriceSeries resample(const PriceSeries& series, std::int64_t interval) {
    const auto base = series.interval();
    if (interval < base || interval % base != 0) {
        throw std::invalid_argument("resample: target interval must be a multiple of " + std::to_string(base));
    }
    const auto per_bucket = static_cast<std::size_t>(interval / base);
    std::vector<Bar> out;
    std::size_t count = 0;
    Bar acc;
    auto bucket_of = [&](Timestamp ts) { return (ts + interval - 1) / interval * interval; };
    for (const auto& b : series.bars()) {
        const Timestamp label = bucket_of(b.timestamp);
        if (count > 0 && label != acc.timestamp) {
            if (count == per_bucket) out.push_back(acc);
            count = 0;
        }
        if (count == 0) {
            acc = b;
            acc.timestamp = label;
        } else {
            acc.high = std::max(acc.high, b.high);
            acc.low = std::min(acc.low, b.low);
            acc.close = b.close;
            acc.volume += b.volume;
        }
        ++count;
    }
    if (count == per_bucket) out.push_back(acc);
    return PriceSeries(series.symbol(), interval, std::move(out));
}

Universe resample(const Universe& universe, std::int64_t interval) {
    Universe out;
    out.caps = universe.caps;
    for (const auto& [sym, s] : universe.series) out.series.emplace(sym, resample(s, interval));
    return out;
}

PriceSeries parse_price_series(const std::string& text, std::int64_t interval, std::string symbol) {
    const auto lines = lines_of(text);
    expect_header(lines, kOhlcvHeader);
    std::vector<Bar> bars;
    bars.reserve(lines.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [row, line] = lines[i];
        const auto cols = split(line, ',');
        if (cols.size() != 6) {
            fail_row(row, "expected 6 columns, found " + std::to_string(cols.size()));
        }
        Bar b;
        b.timestamp = parse_int64(cols[0], row, "timestamp");
        b.open = parse_double(cols[1], row, "open");
        b.high = parse_double(cols[2], row, "high");
        b.low = parse_double(cols[3], row, "low");
        b.close = parse_double(cols[4], row, "close");
        b.volume = parse_double(cols[5], row, "volume");
        if (const auto v = bar_violation(b); !v.empty()) {
            fail_row(row, "bar at timestamp " + std::to_string(b.timestamp) + ": " + v);
        }
        bars.push_back(b);
    }
    return PriceSeries(std::move(symbol), interval, std::move(bars));
}

PriceSeries load_price_series(const std::filesystem::path& path, std::int64_t interval,
                              std::string symbol) {
    if (symbol.empty()) symbol = path.stem().string();
    try {
        return parse_price_series(read_file(path), interval, std::move(symbol));
    } catch (const DataError& e) {
        throw DataError(path.filename().string() + ": " + e.what());
    }
}

std::string serialize_price_series(const PriceSeries& series) {
    std::string out = kOhlcvHeader;
    out += '\n';
    for (const auto& b : series.bars()) {
        out += std::to_string(b.timestamp);
        for (double v : {b.open, b.high, b.low, b.close, b.volume}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<MarketCapRecord> parse_market_caps(const std::string& text) {
    const auto lines = lines_of(text);
    expect_header(lines, kCapHeader);
    std::vector<MarketCapRecord> out;
    std::set<std::pair<std::string, Date>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [row, line] = lines[i];
        const auto cols = split(line, ',');
        if (cols.size() != 3) {
            fail_row(row, "expected 3 columns, found " + std::to_string(cols.size()));
        }
        MarketCapRecord rec;
        try {
            rec.date = parse_date(cols[0]);
        } catch (const std::invalid_argument& e) {
            fail_row(row, e.what());
        }
        rec.symbol = std::string(cols[1]);
        if (rec.symbol.empty()) fail_row(row, "empty symbol");
        rec.cap = parse_double(cols[2], row, "market_cap_usd");
        if (!(rec.cap > 0.0)) fail_row(row, "market cap must be positive");
        if (!seen.emplace(rec.symbol, rec.date).second) {
            fail_row(row, "duplicate record for (" + rec.symbol + ", " + format_date(rec.date) + ")");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<MarketCapRecord> load_market_caps(const std::filesystem::path& path) {
    try {
        return parse_market_caps(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.filename().string() + ": " + e.what());
    }
}

std::string serialize_market_caps(const std::vector<MarketCapRecord>& caps) {
    std::string out = kCapHeader;
    out += '\n';
    for (const auto& c : caps) {
        out += format_date(c.date) + ',' + c.symbol + ',' + format_double(c.cap) + '\n';
    }
    return out;
}

std::vector<FundingRateRecord> parse_funding_rates(const std::string& text) {
    const auto lines = lines_of(text);
    expect_header(lines, kFundingHeader);
    std::vector<FundingRateRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [row, line] = lines[i];
        const auto cols = split(line, ',');
        if (cols.size() != 3) {
            fail_row(row, "expected 3 columns, found " + std::to_string(cols.size()));
        }
        FundingRateRecord rec;
        rec.timestamp = parse_int64(cols[0], row, "timestamp");
        rec.symbol = std::string(cols[1]);
        rec.rate_8h = parse_double(cols[2], row, "rate_8h");
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<FundingRateRecord> load_funding_rates(const std::filesystem::path& path) {
    try {
        return parse_funding_rates(read_file(path));
    } catch (const DataError& e) {
        throw DataError(path.filename().string() + ": " + e.what());
    }
}

namespace {

std::vector<std::filesystem::path> csv_files(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw DataError("cannot read data directory '" + dir.string() + "'");
    }
    std::vector<std::filesystem::path> files;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw DataError("cannot read data directory '" + dir.string() + "': " + ec.message());
    for (const auto& entry : it) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

Universe load_universe(const std::filesystem::path& dir, std::int64_t interval) {
    Universe u;
    for (const auto& file : csv_files(dir)) {
        const auto name = file.filename().string();
        if (name == kMarketCapFile) {
            u.caps = load_market_caps(file);
        } else if (name == kFundingRateFile) {
            continue;
        } else {
            auto s = load_price_series(file, interval);
            auto sym = s.symbol();
            u.series.emplace(std::move(sym), std::move(s));
        }
    }
    if (u.series.empty()) throw DataError("no OHLCV files found in '" + dir.string() + "'");
    return u;
}

void write_universe(const Universe& universe, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [sym, s] : universe.series) {
        write_file_atomic(dir / (sym + ".csv"), serialize_price_series(s));
    }
    write_file_atomic(dir / kMarketCapFile, serialize_market_caps(universe.caps));
}

std::vector<FileCheck> validate_data_dir(const std::filesystem::path& dir, std::int64_t interval) {
    std::vector<FileCheck> out;
    for (const auto& file : csv_files(dir)) {
        FileCheck check;
        check.file = file.filename().string();
        try {
            if (check.file == kMarketCapFile) {
                load_market_caps(file);
            } else if (check.file == kFundingRateFile) {
                load_funding_rates(file);
            } else {
                load_price_series(file, interval);
            }
        } catch (const DataError& e) {
            check.ok = false;
            check.message = e.what();
        }
        out.push_back(std::move(check));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace adaptivetrend
