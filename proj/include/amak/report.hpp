#pragma once

#include "amak/backtest.hpp"
#include "amak/config.hpp"
#include "amak/market_data.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace amak {

std::string_view version();

/// Provenance embedded in every report file.
struct RunManifest {
    Settings config;
    std::string version{amak::version()};
    std::uint64_t seed = 0;
    std::string data_source;   ///< file path or "synthetic:<spec>"
    std::string data_sha256;
    std::string started_at;    ///< ISO-8601 UTC
    std::string finished_at;
};

std::string sha256_hex(std::string_view bytes);

/// Content hash of a price series: asset names, dates and the exact price bits.
std::string fingerprint(const PriceSeries& series);

std::string utc_timestamp();

std::string summary_json(const BacktestResult& result, const RunManifest& manifest);
std::string trajectory_csv(const BacktestResult& result, const RunManifest& manifest);
std::string portfolios_csv(const BacktestResult& result, const RunManifest& manifest,
                           const std::vector<std::string>& asset_names);

/// summary.json, trajectory.csv and portfolios.csv under `out_dir`
/// (created if missing).
void write_reports(const BacktestResult& result, const RunManifest& manifest,
                   const std::vector<std::string>& asset_names, const std::filesystem::path& out_dir);

}  // namespace amak
