#pragma once

#include "amak/clustering.hpp"
#include "amak/market_data.hpp"
#include "amak/portfolio.hpp"

#include <optional>
#include <span>
#include <vector>

namespace amak {

/// One CORN expert identity: window size and correlation threshold.
struct ExpertSpec {
    std::size_t window = 1;
    double rho = 0.1;

    void validate(std::size_t max_window) const;
    friend bool operator==(const ExpertSpec&, const ExpertSpec&) = default;
};

/// Thresholds {1/P, ..., (P-1)/P}.
std::vector<double> correlation_thresholds(std::size_t p);

struct ExpertState {
    ExpertSpec spec;
    double wealth = 1.0;
    Portfolio portfolio;

    ExpertState(ExpertSpec s, std::size_t assets)
        : spec(s), portfolio(Portfolio::uniform(assets)) {}
};

enum class SimilaritySource { correlation, cluster, empty };

/// Days whose relatives feed the log-optimal search. Each entry is an
/// absolute relatives row index.
struct SimilarDaySet {
    std::vector<std::size_t> days;
    SimilaritySource source = SimilaritySource::empty;

    bool empty() const noexcept { return days.empty(); }
};

/// Pearson correlation of two equally sized samples. Empty when either side
/// has zero variance (all entries equal).
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// Correlation of every candidate window against the most recent one.
/// The target day is `history.end()`; the current window is the w rows before
/// it. Candidate day i (for i in [begin + w, end - 1]) is represented by the
/// window of the w rows before i, and `scores[i - first_day]` holds its
/// correlation (empty when undefined).
struct CorrelationScores {
    std::size_t first_day = 0;
    std::vector<std::optional<double>> scores;
};
CorrelationScores correlation_scores(const RelativesView& history, std::size_t w);

SimilarDaySet select_correlated(const CorrelationScores& scores, double rho);

/// All days i in the visible history whose preceding w-row window
/// correlates with the most recent w rows at or above spec.rho.
SimilarDaySet correlation_similar_set(const RelativesView& history, const ExpertSpec& spec);

/// Days following every window co-clustered with the window that ends on
/// `current_day` (a relatives row). The current window itself is excluded,
/// so the returned days are all <= current_day.
SimilarDaySet cluster_similar_set(const ClusterModel& model, std::size_t current_day, std::size_t w);

struct LogOptimalOptions {
    double initial_step = 0.05;
    double gap_tolerance = 1e-10;
    std::size_t max_iterations = 2000;
    double weight_floor = 1e-12;
};

struct LogOptimalResult {
    Portfolio portfolio;
    double objective = 0.0;   ///< mean log growth over the similar days
    double gap = 0.0;         ///< upper bound on (optimum - objective)
    std::size_t iterations = 0;
};

/// argmax over the simplex of prod_i (b . x_i), by exponentiated-gradient
/// ascent from the uniform portfolio with an adaptive step. `rows` holds the
/// selected relatives rows back to back (n * m values).
LogOptimalResult solve_log_optimal(std::span<const double> rows, std::size_t assets,
                                   const LogOptimalOptions& options = {});

Portfolio log_optimal_portfolio(const RelativesView& history, const SimilarDaySet& days,
                                const LogOptimalOptions& options = {});

struct ExpertStepOptions {
    bool cluster_fallback = true;
    std::size_t min_fallback_window = 3;  ///< cluster sets only for w > 2
    LogOptimalOptions solver{};
};

struct ExpertSelection {
    Portfolio portfolio;
    SimilarDaySet days;
};

/// Portfolio for day `history.end()`: correlation set, then (for large enough
/// windows, with a model) the cluster set, then uniform.
ExpertSelection select_portfolio(const RelativesView& history, const ExpertSpec& spec,
                                 const ClusterModel* model, const ExpertStepOptions& options = {});

/// End-of-day update. Row `history.end() - 1` has just been observed: the
/// held portfolio earns it, then a new portfolio is chosen for the next day
/// from `history`.
void expert_step(ExpertState& state, const RelativesView& history, const ClusterModel* model,
                 const ExpertStepOptions& options = {});

}  // namespace amak
