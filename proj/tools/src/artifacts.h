#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptivetrend/analytics.h"
#include "adaptivetrend/config.h"

namespace adaptivetrend::cli {

namespace fs = std::filesystem;

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

/// `timestamp,return` rows.
std::string serialize_returns(const EquityCurve& equity);
std::vector<std::pair<Timestamp, double>> parse_returns(const std::string& text);

/// "70/30" style split for a long share lambda.
std::string allocation_tag(double lambda);

struct Manifest {
    std::string command;
    const RunConfig* config = nullptr;
    std::vector<fs::path> inputs;
    double duration_seconds = 0.0;
};

std::string manifest_json(const Manifest& m);

/// Simple CSV table: header plus rows, every row the same width.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::optional<std::size_t> column(const std::string& name) const;
};

Table parse_csv_table(const std::string& text);

}  // namespace adaptivetrend::cli
