#include "adaptivetrend/trading_types.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adaptivetrend/market_data.h"

namespace adaptivetrend {

std::string_view to_string(Side s) { return s == Side::Long ? "long" : "short"; }

void StrategyParams::validate() const {
    if (std::isnan(theta_entry)) throw std::invalid_argument("theta_entry is NaN");
    if (!(theta_entry_short > 0.0)) throw std::invalid_argument("theta_entry_short must be > 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
    if (lookback < 1) throw std::invalid_argument("lookback must be >= 1");
    if (atr_window < 1) throw std::invalid_argument("atr_window must be >= 1");
}

double gross_pnl(Side side, double size, double entry_price, double exit_price) {
    const double qty = size / entry_price;
    return side_sign(side) * qty * (exit_price - entry_price);
}

namespace {
constexpr const char* kLedgerHeader =
    "symbol,side,entry_ts,entry_px,exit_ts,exit_px,size,gross_pnl,fee,slippage,funding,net_pnl,forced";
}

std::string serialize_ledger(const TradeLedger& ledger) {
    std::string out = kLedgerHeader;
    out += '\n';
    for (const auto& t : ledger) {
        out += t.symbol;
        out += ',';
        out += to_string(t.side);
        out += ',' + std::to_string(t.entry_time) + ',' + format_double(t.entry_price);
        out += ',' + std::to_string(t.exit_time) + ',' + format_double(t.exit_price);
        for (double v : {t.size, t.gross_pnl, t.fee_cost, t.slippage_cost, t.funding_cost, t.net_pnl}) {
            out += ',';
            out += format_double(v);
        }
        out += t.forced ? ",1\n" : ",0\n";
    }
    return out;
}

TradeLedger parse_ledger(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kLedgerHeader) {
        throw DataError("trade ledger: bad or missing header");
    }
    TradeLedger out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string col;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        if (cols.size() != 13) {
            throw DataError("trade ledger: row " + std::to_string(row) + ": expected 13 columns");
        }
        TradeRecord t;
        try {
            t.symbol = cols[0];
            if (cols[1] != "long" && cols[1] != "short") throw std::invalid_argument("side");
            t.side = cols[1] == "long" ? Side::Long : Side::Short;
            t.entry_time = std::stoll(cols[2]);
            t.entry_price = std::stod(cols[3]);
            t.exit_time = std::stoll(cols[4]);
            t.exit_price = std::stod(cols[5]);
            t.size = std::stod(cols[6]);
            t.gross_pnl = std::stod(cols[7]);
            t.fee_cost = std::stod(cols[8]);
            t.slippage_cost = std::stod(cols[9]);
            t.funding_cost = std::stod(cols[10]);
            t.net_pnl = std::stod(cols[11]);
            t.forced = cols[12] == "1";
        } catch (const std::exception&) {
            throw DataError("trade ledger: row " + std::to_string(row) + ": unparsable field");
        }
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<double> equity_returns(const EquityCurve& equity) {
    std::vector<double> out;
    for (std::size_t i = 1; i < equity.size(); ++i) {
        out.push_back(equity[i].balance / equity[i - 1].balance - 1.0);
    }
    return out;
}

std::string serialize_equity(const EquityCurve& equity) {
    std::string out = "timestamp,balance\n";
    for (const auto& p : equity) {
        out += std::to_string(p.timestamp) + ',' + format_double(p.balance) + '\n';
    }
    return out;
}

EquityCurve parse_equity(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "timestamp,balance") {
        throw DataError("equity curve: bad or missing header");
    }
    EquityCurve out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("equity curve: malformed row '" + line + "'");
        try {
            out.push_back({std::stoll(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
        } catch (const std::exception&) {
            throw DataError("equity curve: malformed row '" + line + "'");
        }
    }
    return out;
}

}  // namespace adaptivetrend
