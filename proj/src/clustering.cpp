#include "amak/clustering.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace amak {

double manhattan(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        fail(ErrorCode::invalid_argument, "manhattan distance needs equal dimensions");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

double manhattan(const Features& a, const Features& b) {
    return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) + std::abs(a[2] - b[2]) + std::abs(a[3] - b[3]);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finaliser over the combined words
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double ClusterModel::distance(const Features& a, const Features& b) const {
    return distance_ ? distance_(a, b) : manhattan(a, b);
}

std::size_t ClusterModel::nearest(const Features& v) const {
    if (centroids_.empty()) fail(ErrorCode::invalid_argument, "cluster model has no centroids");
    std::size_t best = 0;
    double best_d = distance(v, centroids_[0]);
    for (std::size_t k = 1; k < centroids_.size(); ++k) {
        const double dk = distance(v, centroids_[k]);
        if (dk < best_d) {
            best_d = dk;
            best = k;
        }
    }
    return best;
}

std::optional<std::size_t> ClusterModel::find(std::size_t day) const {
    auto it = std::lower_bound(store_.begin(), store_.end(), day,
                               [](const MarketVector& v, std::size_t d) { return v.day < d; });
    if (it == store_.end() || it->day != day) return std::nullopt;
    return static_cast<std::size_t>(it - store_.begin());
}

std::optional<std::size_t> ClusterModel::centroid_of(std::size_t day) const {
    if (auto i = find(day)) return assignment_[*i];
    return std::nullopt;
}

std::size_t ClusterModel::assign_vector(const MarketVector& v) {
    const auto k = nearest(v.v);
    auto it = std::lower_bound(store_.begin(), store_.end(), v.day,
                               [](const MarketVector& a, std::size_t d) { return a.day < d; });
    const auto pos = static_cast<std::size_t>(it - store_.begin());
    if (it != store_.end() && it->day == v.day) {
        *it = v;
        assignment_[pos] = k;
    } else {
        store_.insert(it, v);
        assignment_.insert(assignment_.begin() + static_cast<std::ptrdiff_t>(pos), k);
    }
    return k;
}

struct KmuRunner {
    ClusterModel& model;
    const ClusterOptions& options;

    static constexpr std::size_t unassigned = std::numeric_limits<std::size_t>::max();

    std::size_t assign_all() {
        std::size_t changes = 0;
        for (std::size_t i = 0; i < model.store_.size(); ++i) {
            const auto k = model.nearest(model.store_[i].v);
            if (k != model.assignment_[i]) {
                ++changes;
                model.assignment_[i] = k;
            }
        }
        return changes;
    }

    void update_means() {
        const auto c = model.centroids_.size();
        std::vector<Features> sums(c, Features{});
        std::vector<std::size_t> counts(c, 0);
        for (std::size_t i = 0; i < model.store_.size(); ++i) {
            const auto k = model.assignment_[i];
            for (std::size_t f = 0; f < 4; ++f) sums[k][f] += model.store_[i].v[f];
            ++counts[k];
        }
        std::vector<std::size_t> empty;
        for (std::size_t k = 0; k < c; ++k) {
            if (counts[k] == 0) {
                empty.push_back(k);
                continue;
            }
            for (std::size_t f = 0; f < 4; ++f)
                model.centroids_[k][f] = sums[k][f] / static_cast<double>(counts[k]);
        }
        // Empty centroids move onto the vectors worst served by their current centroid.
        std::vector<bool> taken(model.store_.size(), false);
        for (auto k : empty) {
            std::size_t far = unassigned;
            double far_d = -1.0;
            for (std::size_t i = 0; i < model.store_.size(); ++i) {
                if (taken[i]) continue;
                const double di = model.distance(model.store_[i].v, model.centroids_[model.assignment_[i]]);
                if (di > far_d) {
                    far_d = di;
                    far = i;
                }
            }
            if (far == unassigned) break;
            taken[far] = true;
            model.centroids_[k] = model.store_[far].v;
        }
    }
};

namespace {

std::vector<Features> distinct_features(const std::vector<MarketVector>& vectors) {
    std::vector<Features> out;
    for (const auto& v : vectors)
        if (std::find(out.begin(), out.end(), v.v) == out.end()) out.push_back(v.v);
    return out;
}

std::vector<Features> sample_centroids(std::vector<Features> pool, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < c; ++i) {
        const auto j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(c);
    return pool;
}

}  // namespace

KmuResult kmu_online(std::vector<MarketVector> vectors, std::size_t c, const ClusterOptions& options,
                     std::uint64_t seed, std::span<const Features> initial_centroids) {
    if (vectors.empty()) fail(ErrorCode::invalid_argument, "K-means needs at least one market vector");
    if (c == 0) fail(ErrorCode::invalid_argument, "K-means needs at least one centroid");
    if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
        fail(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
    if (options.max_attempts == 0 || options.max_passes == 0)
        fail(ErrorCode::invalid_argument, "max_attempts and max_passes must be positive");

    const auto window = vectors.front().window_size;
    std::sort(vectors.begin(), vectors.end(),
              [](const MarketVector& a, const MarketVector& b) { return a.day < b.day; });

    const auto pool = distinct_features(vectors);
    ClusterStats stats;
    stats.requested = c;
    stats.used = std::min(c, pool.size());

    KmuResult result{ClusterModel(window, options.distance), stats};
    auto& model = result.model;
    model.store_ = std::move(vectors);
    const auto n = model.store_.size();
    KmuRunner runner{model, options};

    for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
        if (attempt == 1 && !initial_centroids.empty()) {
            model.centroids_.assign(initial_centroids.begin(),
                                    initial_centroids.begin() +
                                        static_cast<std::ptrdiff_t>(std::min(initial_centroids.size(), stats.used)));
            // top up a short warm start with sampled positions
            if (model.centroids_.size() < stats.used) {
                auto extra = sample_centroids(pool, stats.used, mix_seed(seed, attempt));
                for (const auto& e : extra) {
                    if (model.centroids_.size() == stats.used) break;
                    if (std::find(model.centroids_.begin(), model.centroids_.end(), e) == model.centroids_.end())
                        model.centroids_.push_back(e);
                }
            }
        } else {
            model.centroids_ = sample_centroids(pool, stats.used, mix_seed(seed, attempt));
        }
        model.assignment_.assign(n, KmuRunner::unassigned);
        result.stats.attempts = attempt;

        for (std::size_t pass = 1; pass <= options.max_passes; ++pass) {
            const auto changes = runner.assign_all();
            ++result.stats.passes;
            result.stats.last_fraction = static_cast<double>(changes) / static_cast<double>(n);
            if (result.stats.last_fraction <= options.epsilon) {
                result.stats.converged = true;
                return result;
            }
            runner.update_means();
        }
    }

    // Out of attempts: keep the last readjustment, but leave every vector on
    // its nearest centroid.
    const auto changes = runner.assign_all();
    ++result.stats.passes;
    result.stats.last_fraction = static_cast<double>(changes) / static_cast<double>(n);
    return result;
}

void ClusterLifecycleConfig::validate() const {
    if (max_window == 0) fail(ErrorCode::invalid_argument, "max window size must be at least 1");
    if (d <= max_window) fail(ErrorCode::invalid_argument, "memory d must exceed the max window size");
    if (d / 3 == 0) fail(ErrorCode::invalid_argument, "memory d must be at least 3");
    if (!(options.epsilon > 0.0 && options.epsilon < 1.0))
        fail(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
    if (options.max_attempts == 0) fail(ErrorCode::invalid_argument, "max_attempts must be at least 1");
    if (options.max_passes == 0) fail(ErrorCode::invalid_argument, "max_passes must be at least 1");
}

ClusterLifecycle::ClusterLifecycle(ClusterLifecycleConfig config, const RelativesView& memory)
    : config_(std::move(config)) {
    config_.validate();
    if (memory.size() < config_.d)
        fail(ErrorCode::insufficient_data, "cluster initialisation needs " + std::to_string(config_.d) +
                                               " days of memory, have " + std::to_string(memory.size()));
    day_ = memory.end();
    reinit(memory);
    log_.push_back("day=" + std::to_string(day_) + " horizon=" + std::to_string(config_.d) +
                   " event=init centroids=" + std::to_string(target_));
}

const ClusterModel& ClusterLifecycle::model(std::size_t w) const {
    if (w == 0 || w > models_.size()) fail(ErrorCode::invalid_argument, "no cluster model for window size " + std::to_string(w));
    return models_[w - 1];
}

std::vector<std::string> ClusterLifecycle::drain_log() { return std::exchange(log_, {}); }

void ClusterLifecycle::note(const ClusterStats& stats, std::size_t w) {
    const auto prefix = "day=" + std::to_string(day_) + " horizon=" + std::to_string(config_.d) +
                        " window=" + std::to_string(w);
    if (stats.used < stats.requested)
        log_.push_back(prefix + " event=clamp requested=" + std::to_string(stats.requested) +
                       " used=" + std::to_string(stats.used));
    if (stats.attempts > 1 || !stats.converged)
        log_.push_back(prefix + " event=restarts attempts=" + std::to_string(stats.attempts) +
                       " converged=" + (stats.converged ? "true" : "false"));
}

void ClusterLifecycle::reinit(const RelativesView& memory) {
    target_ = config_.growth_interval();
    const auto recent = memory.sub(memory.end() - config_.d, memory.end());
    models_.clear();
    for (std::size_t w = 1; w <= config_.max_window; ++w) {
        auto vectors = window_vectors(recent, w);
        auto res = kmu_online(std::move(vectors), target_, config_.options,
                              mix_seed(config_.seed, day_ * 64 + w));
        note(res.stats, w);
        models_.push_back(std::move(res.model));
    }
}

LifecycleEvent ClusterLifecycle::step(const RelativesView& memory) {
    const auto t = memory.end();
    if (t <= day_) fail(ErrorCode::internal, "cluster lifecycle must advance one day at a time");
    day_ = t;
    const auto horizon = " horizon=" + std::to_string(config_.d);

    if (t % config_.reset_interval() == 0) {
        reinit(memory);
        log_.push_back("day=" + std::to_string(t) + horizon + " event=reset centroids=" + std::to_string(target_));
        return LifecycleEvent::reset;
    }

    auto event = LifecycleEvent::none;
    if (t % config_.growth_interval() == 0) {
        ++target_;
        event = LifecycleEvent::add_centroid;
        log_.push_back("day=" + std::to_string(t) + horizon + " event=add_centroid centroids=" +
                       std::to_string(target_));
    }

    for (std::size_t w = 1; w <= config_.max_window; ++w) {
        auto& model = models_[w - 1];
        std::vector<MarketVector> vectors;
        vectors.reserve(model.store_.size() + 1);
        for (const auto& v : model.store_)
            if (v.day + 1 >= memory.begin() + w) vectors.push_back(v);  // window still in memory
        const auto newest = market_vector(MarketWindow(memory, t - 1, w));
        vectors.push_back(newest);

        std::vector<Features> start = model.centroids_;
        if (event == LifecycleEvent::add_centroid) start.push_back(newest.v);

        auto res = kmu_online(std::move(vectors), target_, config_.options,
                              mix_seed(config_.seed, t * 64 + w), start);
        note(res.stats, w);
        model = std::move(res.model);
    }
    return event;
}

}  // namespace amak
