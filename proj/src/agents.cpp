#include "amak/agents.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <utility>

namespace amak {

void SubAgentConfig::validate() const {
    if (max_window == 0) fail(ErrorCode::invalid_argument, "max window W must be at least 1");
    if (thresholds < 2) fail(ErrorCode::invalid_argument, "threshold count P must be at least 2");
    if (d < 2 * max_window)
        fail(ErrorCode::invalid_argument, "memory d=" + std::to_string(d) + " must be at least 2W=" +
                                              std::to_string(2 * max_window));
    if (cluster_fallback && d / 3 == 0) fail(ErrorCode::invalid_argument, "memory d must be at least 3");
    if (top_k == 0 || top_k > expert_count())
        fail(ErrorCode::invalid_argument, "top K=" + std::to_string(top_k) + " must lie in 1.." +
                                              std::to_string(expert_count()));
}

Portfolio top_k_combine(std::span<const ExpertState> experts, std::size_t k) {
    if (k == 0 || experts.size() < k)
        fail(ErrorCode::invalid_argument, "top-K combination needs at least K=" + std::to_string(k) + " experts");
    std::vector<std::size_t> order(experts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return experts[a].wealth > experts[b].wealth; });
    std::vector<Portfolio> chosen;
    chosen.reserve(k);
    for (std::size_t i = 0; i < k; ++i) chosen.push_back(experts[order[i]].portfolio);
    return merge_portfolios(chosen);
}

SubAgent::SubAgent(SubAgentConfig config, const RelativesView& history)
    : config_(std::move(config)), portfolio_(Portfolio::uniform(std::max<std::size_t>(history.assets(), 1))) {
    config_.validate();
    day_ = history.end();
    if (day_ < config_.d)
        fail(ErrorCode::insufficient_data, "sub-agent with d=" + std::to_string(config_.d) + " needs " +
                                               std::to_string(config_.d) + " days of history, have " +
                                               std::to_string(day_));
    memory_begin_ = config_.truncate_memory ? day_ - (config_.d + day_ % config_.d) : 0;
    const auto memory = RelativesView(history.matrix(), memory_begin_, day_);

    for (std::size_t w = 1; w <= config_.max_window; ++w)
        for (double rho : correlation_thresholds(config_.thresholds))
            experts_.emplace_back(ExpertSpec{w, rho}, history.assets());

    if (config_.cluster_fallback) {
        ClusterLifecycleConfig lc;
        lc.d = config_.d;
        lc.max_window = config_.max_window;
        lc.options = config_.clustering;
        lc.seed = mix_seed(config_.seed, config_.d);
        lifecycle_.emplace(lc, memory);
    }
    select_all(memory);
}

const Portfolio& SubAgent::step(const RelativesView& history) {
    if (history.end() != day_ + 1)
        fail(ErrorCode::internal, "sub-agent expected day " + std::to_string(day_ + 1) + ", got " +
                                      std::to_string(history.end()));
    day_ = history.end();
    const auto newest = history.row(day_ - 1);
    for (auto& e : experts_) e.wealth = wealth_step(e.wealth, e.portfolio, newest);

    if (config_.truncate_memory && day_ % config_.d == 0) memory_begin_ = day_ - config_.d;
    const auto memory = RelativesView(history.matrix(), memory_begin_, day_);
    if (lifecycle_) lifecycle_->step(memory);

    select_all(memory);
    return portfolio_;
}

void SubAgent::select_all(const RelativesView& memory) {
    const auto m = memory.assets();
    const auto current_day = memory.end() - 1;
    std::size_t e = 0;
    for (std::size_t w = 1; w <= config_.max_window; ++w) {
        const auto scores = correlation_scores(memory, w);
        const bool fallback = lifecycle_ && w > 2;
        // Consecutive thresholds often select the same days; reuse the solve.
        std::vector<std::size_t> last_days;
        std::optional<Portfolio> last_portfolio;
        for (std::size_t p = 1; p < config_.thresholds; ++p, ++e) {
            auto& expert = experts_[e];
            auto days = select_correlated(scores, expert.spec.rho);
            if (days.empty() && fallback) days = cluster_similar_set(lifecycle_->model(w), current_day, w);
            if (days.empty()) {
                expert.portfolio = Portfolio::uniform(m);
                continue;
            }
            if (!last_portfolio || days.days != last_days) {
                last_portfolio = log_optimal_portfolio(memory, days, config_.solver);
                last_days = std::move(days.days);
            }
            expert.portfolio = *last_portfolio;
        }
    }
    portfolio_ = top_k_combine(experts_, config_.top_k);
}

std::vector<std::string> SubAgent::drain_log() {
    if (!lifecycle_) return {};
    return lifecycle_->drain_log();
}

AmakConfig AmakConfig::defaults(std::uint64_t seed) {
    AmakConfig cfg;
    for (std::size_t d : {10, 120, 190}) {
        SubAgentConfig s;
        s.d = d;
        s.seed = seed;
        cfg.horizons.push_back(s);
    }
    return cfg;
}

std::size_t AmakConfig::warmup() const {
    std::size_t w = 0;
    for (const auto& h : horizons) w = std::max(w, h.d);
    return w;
}

void AmakConfig::validate() const {
    if (horizons.empty()) fail(ErrorCode::invalid_argument, "AMA-K needs at least one horizon");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        horizons[i].validate();
        for (std::size_t j = 0; j < i; ++j)
            if (horizons[j].d == horizons[i].d)
                fail(ErrorCode::invalid_argument, "duplicate AMA-K horizon d=" + std::to_string(horizons[i].d));
    }
}

Portfolio amak_merge(std::span<const SubAgent> agents) {
    if (agents.empty()) fail(ErrorCode::invalid_argument, "AMA-K merge over no sub-agents");
    std::vector<Portfolio> ports;
    ports.reserve(agents.size());
    for (const auto& a : agents) ports.push_back(a.portfolio());
    return merge_portfolios(ports);
}

Amak::Amak(AmakConfig config, const RelativesView& history)
    : config_(std::move(config)), portfolio_(Portfolio::uniform(std::max<std::size_t>(history.assets(), 1))) {
    config_.validate();
    agents_.reserve(config_.horizons.size());
    for (const auto& h : config_.horizons) agents_.emplace_back(h, history);
    portfolio_ = amak_merge(agents_);
}

const Portfolio& Amak::step(const RelativesView& history) {
    if (config_.parallel && agents_.size() > 1) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(agents_.size());
        for (auto& a : agents_)
            jobs.push_back(std::async(std::launch::async, [&a, &history] { a.step(history); }));
        for (auto& j : jobs) j.get();
    } else {
        for (auto& a : agents_) a.step(history);
    }
    portfolio_ = amak_merge(agents_);
    return portfolio_;
}

std::vector<std::string> Amak::drain_log() {
    std::vector<std::string> out;
    for (auto& a : agents_) {
        auto lines = a.drain_log();
        out.insert(out.end(), std::make_move_iterator(lines.begin()), std::make_move_iterator(lines.end()));
    }
    return out;
}

}  // namespace amak
