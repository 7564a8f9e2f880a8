#pragma once

#include "amak/agents.hpp"
#include "amak/baselines.hpp"
#include "amak/market_data.hpp"
#include "amak/metrics.hpp"
#include "amak/portfolio.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amak {

enum class StrategyKind { amak, corn_k, ubah, crp, best_stock, eg };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);
/// Comma-separated list, e.g. "amak,corn-k,ubah".
std::vector<StrategyKind> parse_strategy_list(std::string_view list);
const std::vector<StrategyKind>& all_strategies();

struct CornKConfig {
    std::size_t warmup = 300;
    std::size_t max_window = 5;
    std::size_t thresholds = 10;
    std::size_t top_k = 5;
};

/// Sub-agent settings that make a plain CORN-K: no cluster fallback and no
/// memory truncation, so every expert searches the full history.
SubAgentConfig corn_k_agent_config(const CornKConfig& config, const LogOptimalOptions& solver = {});

struct BacktestConfig {
    std::vector<StrategyKind> strategies = all_strategies();
    AmakConfig amak = AmakConfig::defaults();
    std::optional<std::size_t> amak_warmup;  ///< defaults to the largest horizon d
    CornKConfig corn_k{};
    EgConfig eg{};
    std::optional<std::vector<double>> crp_weights;
    LogOptimalOptions solver{};
    SharpeMode sharpe = SharpeMode::fixed_sigma;
    std::uint64_t seed = 42;

    void validate() const;
    /// Days observed before the strategy places its first portfolio.
    std::size_t warmup(StrategyKind kind) const;
    /// Largest warm-up across the selected strategies; evaluation starts after it.
    std::size_t common_warmup() const;
};

struct StrategyResult {
    StrategyKind kind;
    WealthTrajectory trajectory;        ///< S_0 = 1 at the end of the warm-up
    std::vector<Portfolio> portfolios;  ///< portfolios[k] was held on evaluated day k
    MetricReport metrics;
};

struct BacktestResult {
    std::size_t warmup = 0;     ///< relatives rows observed before evaluation
    std::size_t first_day = 0;  ///< 1-based day number of the first evaluated day
    std::size_t last_day = 0;
    std::vector<StrategyResult> strategies;

    const StrategyResult& get(StrategyKind kind) const;
    std::size_t evaluated_days() const noexcept { return last_day + 1 - first_day; }
};

using LogSink = std::function<void(std::string_view)>;

/// Steps every selected strategy through the relatives one day at a time.
/// Each strategy only ever sees rows before the day it is allocating for.
/// Best Stock is the exception by definition: it picks its asset with
/// hindsight over the evaluation span.
BacktestResult run_backtest(const BacktestConfig& config, const PriceRelativeMatrix& relatives,
                            const LogSink& log = {});

struct Regime {
    std::size_t start_day = 0;  ///< first price step the regime applies to
    std::vector<double> drift;
    std::vector<double> volatility;
};

struct SyntheticSpec {
    std::size_t n_days = 600;
    std::size_t m_assets = 5;
    std::vector<double> drift{0.0003};       ///< one value for all assets, or one per asset
    std::vector<double> volatility{0.015};
    std::vector<Regime> regimes;             ///< ordered by start_day
    std::uint64_t seed = 42;
    double start_price = 100.0;
    std::string start_date = "2000-01-03";

    void validate() const;
};

/// Geometric random walk, price[t+1][j] = price[t][j] * exp(drift + vol * z),
/// with business-day dates. Prices are rounded to 12 significant digits so
/// the CSV form reloads bit-exactly.
PriceSeries generate_synthetic(const SyntheticSpec& spec);

}  // namespace amak
