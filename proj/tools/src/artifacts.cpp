#include "artifacts.h"

#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

namespace adaptivetrend::cli {

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 0xF];
    }
    return out;
}

std::string serialize_returns(const EquityCurve& equity) {
    std::string out = "timestamp,return\n";
    for (std::size_t i = 1; i < equity.size(); ++i) {
        out += std::to_string(equity[i].timestamp) + ',' +
               format_double(equity[i].balance / equity[i - 1].balance - 1.0) + '\n';
    }
    return out;
}

std::vector<std::pair<Timestamp, double>> parse_returns(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "timestamp,return") {
        throw DataError("returns file: bad or missing header");
    }
    std::vector<std::pair<Timestamp, double>> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("columns");
            out.emplace_back(std::stoll(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw DataError("returns file: row " + std::to_string(row) + ": malformed");
        }
    }
    return out;
}

std::string allocation_tag(double lambda) {
    const auto l = static_cast<int>(std::lround(lambda * 100.0));
    return std::to_string(l) + "/" + std::to_string(100 - l);
}

std::string manifest_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["engine_version"] = ADAPTIVETREND_VERSION;
    j["command"] = m.command;
    if (m.config) {
        j["seed"] = m.config->seed;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config_snapshot(*m.config)) cfg[k] = v;
        j["config"] = cfg;
    }
    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& p : m.inputs) {
        inputs.push_back({{"file", p.filename().string()}, {"sha256", sha256_file(p)}});
    }
    j["inputs"] = inputs;
    j["duration_seconds"] = m.duration_seconds;
    return j.dump(2) + "\n";
}

std::string Table::to_csv() const {
    auto line = [](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        return out + '\n';
    };
    std::string out = line(header);
    for (const auto& r : rows) out += line(r);
    return out;
}

std::optional<std::size_t> Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

Table parse_csv_table(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            cells.resize(t.header.size());
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace adaptivetrend::cli
