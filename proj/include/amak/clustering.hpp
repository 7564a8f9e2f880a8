#pragma once

#include "amak/market_data.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace amak {

double manhattan(std::span<const double> a, std::span<const double> b);
double manhattan(const Features& a, const Features& b);

using DistanceFn = double (*)(const Features&, const Features&);

struct ClusterOptions {
    double epsilon = 0.006;           ///< stop once a pass reassigns at most this fraction
    std::size_t max_attempts = 10;    ///< seeded re-initialisations before giving up
    std::size_t max_passes = 100;     ///< assign/update passes per attempt
    DistanceFn distance = nullptr;    ///< nullptr selects manhattan
};

/// Centroids plus the market vectors they currently partition, for a single
/// window size. `store` is ordered by day and `assignment[i]` is the centroid
/// index of `store[i]`.
class ClusterModel {
public:
    explicit ClusterModel(std::size_t window_size = 0, DistanceFn distance = nullptr)
        : window_size_(window_size), distance_(distance) {}

    std::size_t window_size() const noexcept { return window_size_; }
    const std::vector<Features>& centroids() const noexcept { return centroids_; }
    const std::vector<MarketVector>& store() const noexcept { return store_; }
    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

    /// Nearest centroid (lowest index on ties). Does not modify the model.
    std::size_t nearest(const Features& v) const;

    /// Position of the stored vector for `day`, if any.
    std::optional<std::size_t> find(std::size_t day) const;
    std::optional<std::size_t> centroid_of(std::size_t day) const;

    /// Assigns v to its nearest centroid and records it in the store
    /// (replacing an existing entry for the same day).
    std::size_t assign_vector(const MarketVector& v);

    double distance(const Features& a, const Features& b) const;

private:
    friend struct KmuRunner;
    friend class ClusterLifecycle;
    friend struct KmuResult kmu_online(std::vector<MarketVector>, std::size_t, const ClusterOptions&,
                                       std::uint64_t, std::span<const Features>);

    std::size_t window_size_;
    DistanceFn distance_;
    std::vector<Features> centroids_;
    std::vector<MarketVector> store_;
    std::vector<std::size_t> assignment_;
};

struct ClusterStats {
    std::size_t requested = 0;  ///< centroid count asked for
    std::size_t used = 0;       ///< after clamping to the distinct-vector count
    std::size_t attempts = 0;   ///< initialisations consumed (1 = no restart)
    std::size_t passes = 0;     ///< assignment passes over all attempts
    bool converged = false;     ///< reached epsilon before running out of attempts
    double last_fraction = 0.0; ///< reassigned fraction in the final pass
};

struct KmuResult {
    ClusterModel model;
    ClusterStats stats;
};

/// Online K-means with Manhattan assignment and mean centroid updates.
/// Attempt 1 starts from `initial_centroids` when given (warm start),
/// otherwise from c distinct stored vectors drawn with the seeded RNG;
/// every later attempt draws fresh seeded positions. On return every vector
/// is assigned to its nearest centroid.
KmuResult kmu_online(std::vector<MarketVector> vectors, std::size_t c, const ClusterOptions& options,
                     std::uint64_t seed, std::span<const Features> initial_centroids = {});

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

struct ClusterLifecycleConfig {
    std::size_t d = 10;           ///< memory length in days
    std::size_t max_window = 5;   ///< W; one model per window size 1..W
    ClusterOptions options{};
    std::uint64_t seed = 0;

    std::size_t growth_interval() const noexcept { return d / 3; }
    std::size_t reset_interval() const noexcept { return 2 * d; }
    void validate() const;
};

enum class LifecycleEvent { none, reset, add_centroid };

/// The supplementary-clusters schedule for one sub-agent: one ClusterModel
/// per window size, a full reset on the most recent d days every 2d days,
/// and one extra centroid every floor(d/3) days in between.
///
/// Day numbers are 1-based counts of observed relatives rows, so the day
/// whose relatives row is r is day r + 1. The store of each model only ever
/// holds windows lying inside the sub-agent's memory.
class ClusterLifecycle {
public:
    /// Clusters every window inside `memory` with floor(d/3) centroids.
    /// `memory.end()` is the current day.
    ClusterLifecycle(ClusterLifecycleConfig config, const RelativesView& memory);

    /// Advances to day `memory.end()`. `memory` must already reflect any
    /// truncation that happened on this day.
    LifecycleEvent step(const RelativesView& memory);

    const ClusterModel& model(std::size_t w) const;
    std::size_t target_centroids() const noexcept { return target_; }
    std::size_t day() const noexcept { return day_; }
    const ClusterLifecycleConfig& config() const noexcept { return config_; }

    /// Log lines accumulated since the last drain (reset, add_centroid,
    /// clamp and restart events).
    std::vector<std::string> drain_log();

private:
    void reinit(const RelativesView& memory);
    void note(const ClusterStats& stats, std::size_t w);

    ClusterLifecycleConfig config_;
    std::vector<ClusterModel> models_;
    std::size_t target_ = 0;
    std::size_t day_ = 0;
    std::vector<std::string> log_;
};

}  // namespace amak
