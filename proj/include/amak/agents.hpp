#pragma once

#include "amak/clustering.hpp"
#include "amak/experts.hpp"
#include "amak/market_data.hpp"
#include "amak/portfolio.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace amak {

struct SubAgentConfig {
    std::size_t d = 10;           ///< memory horizon in days
    std::size_t max_window = 5;   ///< W
    std::size_t thresholds = 10;  ///< P; experts use rho in {1/P, ..., (P-1)/P}
    std::size_t top_k = 5;        ///< K
    std::uint64_t seed = 0;
    bool cluster_fallback = true;
    bool truncate_memory = true;
    ClusterOptions clustering{};
    LogOptimalOptions solver{};

    std::size_t expert_count() const noexcept { return max_window * (thresholds - 1); }
    void validate() const;
};

/// Mean of the portfolios of the k wealthiest experts. Ties go to the expert
/// listed first, so callers keep experts sorted by (window, rho).
Portfolio top_k_combine(std::span<const ExpertState> experts, std::size_t k);

/// A CORN-K agent over one memory horizon d, with the cluster-similar-day
/// fallback and the d..2d memory cycle.
///
/// Memory length at day t is d + (t mod d): it grows by one row a day and is
/// cut back to the most recent d rows on every day that is a multiple of d,
/// which includes every 2d cluster reset. With truncation disabled the whole
/// history stays visible (plain CORN-K).
class SubAgent {
public:
    /// Starts trading after observing rows [0, history.end()).
    SubAgent(SubAgentConfig config, const RelativesView& history);

    /// End of day `history.end()`: the newest row is realised by every
    /// expert, memory and clusters advance, and a combined portfolio for the
    /// next day is chosen.
    const Portfolio& step(const RelativesView& history);

    const Portfolio& portfolio() const noexcept { return portfolio_; }
    const std::vector<ExpertState>& experts() const noexcept { return experts_; }
    const SubAgentConfig& config() const noexcept { return config_; }
    std::size_t memory_begin() const noexcept { return memory_begin_; }
    std::size_t day() const noexcept { return day_; }
    std::size_t memory_size() const noexcept { return day_ - memory_begin_; }
    const ClusterLifecycle* lifecycle() const noexcept { return lifecycle_ ? &*lifecycle_ : nullptr; }

    std::vector<std::string> drain_log();

private:
    void select_all(const RelativesView& memory);

    SubAgentConfig config_;
    std::vector<ExpertState> experts_;
    std::optional<ClusterLifecycle> lifecycle_;
    std::size_t memory_begin_ = 0;
    std::size_t day_ = 0;
    Portfolio portfolio_;
};

struct AmakConfig {
    std::vector<SubAgentConfig> horizons;
    bool parallel = false;  ///< step sub-agents on worker threads

    /// Horizons of 10, 120 and 190 days, W = 5, P = 10, K = 5.
    static AmakConfig defaults(std::uint64_t seed = 0);
    std::size_t warmup() const;
    void validate() const;
};

/// Equal-weight merge of several sub-agents with different horizons.
class Amak {
public:
    Amak(AmakConfig config, const RelativesView& history);

    const Portfolio& step(const RelativesView& history);

    const Portfolio& portfolio() const noexcept { return portfolio_; }
    const std::vector<SubAgent>& agents() const noexcept { return agents_; }
    std::vector<std::string> drain_log();

private:
    AmakConfig config_;
    std::vector<SubAgent> agents_;
    Portfolio portfolio_;
};

/// Merge of the sub-agents' current portfolios, in horizon order.
Portfolio amak_merge(std::span<const SubAgent> agents);

}  // namespace amak
