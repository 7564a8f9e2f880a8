#pragma once

#include "amak/backtest.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace amak {

// Plain-text configuration: INI-style sections with key = value lines,
// '#' or ';' comments. Every key is optional.
//
//   [backtest]  strategies, seed, sharpe_mode
//   [amak]      horizons, max_window, thresholds, top_k, cluster_fallback,
//               warmup, parallel, epsilon, max_attempts, max_passes
//   [corn_k]    warmup, max_window, thresholds, top_k
//   [eg]        eta
//   [crp]       weights
//   [solver]    initial_step, gap_tolerance, max_iterations

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Parses "section.key" = value pairs in file order.
Settings parse_settings(std::string_view text);
Settings load_settings(const std::filesystem::path& path);

/// Applies one dotted key; unknown keys and malformed values are rejected.
void apply_setting(BacktestConfig& config, std::string_view key, std::string_view value);
void apply_settings(BacktestConfig& config, const Settings& settings);

/// Every effective setting, dotted keys in a fixed order.
Settings describe(const BacktestConfig& config);

// Synthetic spec files use the same syntax:
//
//   [synthetic]       n_days, m_assets, drift, volatility, seed, start_price, start_date
//   [regime.<day>]    drift, volatility   (takes effect from price step <day>)
//
// drift and volatility take one value or one per asset, comma separated.
SyntheticSpec parse_synthetic_spec(std::string_view text);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);
Settings describe(const SyntheticSpec& spec);

}  // namespace amak
