#include "amak/experts.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace amak {

void ExpertSpec::validate(std::size_t max_window) const {
    if (window == 0 || window > max_window)
        fail(ErrorCode::invalid_argument, "expert window " + std::to_string(window) + " outside 1.." +
                                              std::to_string(max_window));
    if (!(rho > 0.0 && rho < 1.0)) fail(ErrorCode::invalid_argument, "expert rho must lie in (0, 1)");
}

std::vector<double> correlation_thresholds(std::size_t p) {
    if (p < 2) fail(ErrorCode::invalid_argument, "threshold count P must be at least 2");
    std::vector<double> out;
    for (std::size_t k = 1; k < p; ++k) out.push_back(static_cast<double>(k) / static_cast<double>(p));
    return out;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) fail(ErrorCode::invalid_argument, "pearson needs equally sized samples");
    if (a.empty()) return std::nullopt;
    const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
    const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
    if (*amin == *amax || *bmin == *bmax) return std::nullopt;

    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (!(saa > 0.0 && sbb > 0.0)) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

namespace {

// w rows starting at `first` are contiguous in the row-major matrix.
std::span<const double> flat_window(const RelativesView& history, std::size_t first, std::size_t w) {
    const auto m = history.assets();
    return {history.row(first).data(), w * m};
}

}  // namespace

CorrelationScores correlation_scores(const RelativesView& history, std::size_t w) {
    if (w == 0) fail(ErrorCode::invalid_argument, "window size must be positive");
    CorrelationScores out;
    out.first_day = history.begin() + w;
    if (history.size() < w + 1) return out;

    const auto end = history.end();
    const auto current = flat_window(history, end - w, w);
    out.scores.reserve(end - out.first_day);
    for (auto i = out.first_day; i < end; ++i)
        out.scores.push_back(pearson(flat_window(history, i - w, w), current));
    return out;
}

SimilarDaySet select_correlated(const CorrelationScores& scores, double rho) {
    SimilarDaySet set;
    for (std::size_t k = 0; k < scores.scores.size(); ++k)
        if (scores.scores[k] && *scores.scores[k] >= rho) set.days.push_back(scores.first_day + k);
    set.source = set.days.empty() ? SimilaritySource::empty : SimilaritySource::correlation;
    return set;
}

SimilarDaySet correlation_similar_set(const RelativesView& history, const ExpertSpec& spec) {
    return select_correlated(correlation_scores(history, spec.window), spec.rho);
}

SimilarDaySet cluster_similar_set(const ClusterModel& model, std::size_t current_day, std::size_t w) {
    if (model.window_size() != w)
        fail(ErrorCode::invalid_argument, "cluster model serves window " + std::to_string(model.window_size()) +
                                              ", asked for " + std::to_string(w));
    const auto centroid = model.centroid_of(current_day);
    if (!centroid)
        fail(ErrorCode::internal, "market vector for day " + std::to_string(current_day) +
                                      " is missing from the cluster model");
    SimilarDaySet set;
    const auto& store = model.store();
    for (std::size_t i = 0; i < store.size(); ++i)
        if (store[i].day != current_day && model.assignment()[i] == *centroid)
            set.days.push_back(store[i].day + 1);
    set.source = set.days.empty() ? SimilaritySource::empty : SimilaritySource::cluster;
    return set;
}

LogOptimalResult solve_log_optimal(std::span<const double> rows, std::size_t assets,
                                   const LogOptimalOptions& options) {
    if (assets == 0) fail(ErrorCode::invalid_argument, "log-optimal search over zero assets");
    if (rows.empty() || rows.size() % assets != 0)
        fail(ErrorCode::invalid_argument, "log-optimal search needs a non-empty set of similar days");
    const std::size_t n = rows.size() / assets;
    const double nd = static_cast<double>(n);

    auto objective = [&](const std::vector<double>& b) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double p = 0.0;
            for (std::size_t j = 0; j < assets; ++j) p += b[j] * rows[i * assets + j];
            f += std::log(p);
        }
        return f / nd;
    };

    std::vector<double> b(assets, 1.0 / static_cast<double>(assets));
    std::vector<double> grad(assets);
    std::vector<double> trial(assets);
    double f = objective(b);
    double step = options.initial_step;
    double gap = 0.0;
    std::size_t it = 0;

    for (; it < options.max_iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double p = 0.0;
            for (std::size_t j = 0; j < assets; ++j) p += b[j] * rows[i * assets + j];
            for (std::size_t j = 0; j < assets; ++j) grad[j] += rows[i * assets + j] / p;
        }
        double gmax = grad[0] / nd;
        double gdot = 0.0;
        for (std::size_t j = 0; j < assets; ++j) {
            grad[j] /= nd;
            gmax = std::max(gmax, grad[j]);
            gdot += b[j] * grad[j];
        }
        // Concavity: optimum - f(b) <= max_j g_j - b.g
        gap = gmax - gdot;
        if (gap <= options.gap_tolerance) break;

        bool accepted = false;
        while (!accepted && step > 1e-14) {
            double z = 0.0;
            for (std::size_t j = 0; j < assets; ++j) {
                trial[j] = std::max(b[j] * std::exp(step * (grad[j] - gmax)), options.weight_floor);
                z += trial[j];
            }
            for (double& t : trial) t /= z;
            const double ft = objective(trial);
            if (ft > f) {
                accepted = true;
                b.swap(trial);
                f = ft;
                step = std::min(step * 2.0, 1e12);
            } else {
                step *= 0.5;
            }
        }
        if (!accepted) break;  // no representable ascent left
    }

    return LogOptimalResult{Portfolio(std::move(b)), f, gap, it};
}

Portfolio log_optimal_portfolio(const RelativesView& history, const SimilarDaySet& days,
                                const LogOptimalOptions& options) {
    if (days.empty()) fail(ErrorCode::invalid_argument, "log-optimal search needs at least one similar day");
    const auto m = history.assets();
    std::vector<double> rows;
    rows.reserve(days.days.size() * m);
    for (auto d : days.days) {
        const auto r = history.row(d);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return solve_log_optimal(rows, m, options).portfolio;
}

ExpertSelection select_portfolio(const RelativesView& history, const ExpertSpec& spec,
                                 const ClusterModel* model, const ExpertStepOptions& options) {
    auto days = correlation_similar_set(history, spec);
    if (days.empty() && options.cluster_fallback && model && spec.window >= options.min_fallback_window &&
        history.end() > 0)
        days = cluster_similar_set(*model, history.end() - 1, spec.window);
    if (days.empty()) {
        days.source = SimilaritySource::empty;
        return {Portfolio::uniform(history.assets()), std::move(days)};
    }
    auto b = log_optimal_portfolio(history, days, options.solver);
    return {std::move(b), std::move(days)};
}

void expert_step(ExpertState& state, const RelativesView& history, const ClusterModel* model,
                 const ExpertStepOptions& options) {
    if (history.size() == 0) fail(ErrorCode::invalid_argument, "expert step needs an observed day");
    state.wealth = wealth_step(state.wealth, state.portfolio, history.row(history.end() - 1));
    state.portfolio = select_portfolio(history, state.spec, model, options).portfolio;
}

}  // namespace amak
