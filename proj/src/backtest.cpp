#include "amak/backtest.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>

namespace amak {

namespace {

struct StrategyName {
    StrategyKind kind;
    std::string_view name;
};

constexpr StrategyName kNames[] = {
    {StrategyKind::amak, "amak"},      {StrategyKind::corn_k, "corn-k"},
    {StrategyKind::ubah, "ubah"},      {StrategyKind::crp, "crp"},
    {StrategyKind::best_stock, "best-stock"}, {StrategyKind::eg, "eg"},
};

}  // namespace

std::string_view to_string(StrategyKind kind) {
    for (const auto& n : kNames)
        if (n.kind == kind) return n.name;
    return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
    for (const auto& n : kNames)
        if (n.name == name) return n.kind;
    fail(ErrorCode::invalid_argument,
         "unknown strategy '" + std::string(name) + "' (expected amak, corn-k, ubah, crp, best-stock or eg)");
}

std::vector<StrategyKind> parse_strategy_list(std::string_view list) {
    std::vector<StrategyKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        if (comma == std::string_view::npos) comma = list.size();
        auto item = list.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            const auto kind = parse_strategy(item);
            if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
        }
        start = comma + 1;
    }
    if (out.empty()) fail(ErrorCode::invalid_argument, "strategy list is empty");
    return out;
}

const std::vector<StrategyKind>& all_strategies() {
    static const std::vector<StrategyKind> all{StrategyKind::amak, StrategyKind::corn_k, StrategyKind::ubah,
                                               StrategyKind::crp,  StrategyKind::best_stock, StrategyKind::eg};
    return all;
}

SubAgentConfig corn_k_agent_config(const CornKConfig& config, const LogOptimalOptions& solver) {
    SubAgentConfig s;
    s.d = config.warmup;
    s.max_window = config.max_window;
    s.thresholds = config.thresholds;
    s.top_k = config.top_k;
    s.cluster_fallback = false;
    s.truncate_memory = false;
    s.solver = solver;
    return s;
}

void BacktestConfig::validate() const {
    if (strategies.empty()) fail(ErrorCode::invalid_argument, "select at least one strategy");
    const auto uses = [&](StrategyKind k) { return std::find(strategies.begin(), strategies.end(), k) != strategies.end(); };
    if (uses(StrategyKind::amak)) {
        amak.validate();
        if (amak_warmup && *amak_warmup < amak.warmup())
            fail(ErrorCode::invalid_argument, "AMA-K warm-up " + std::to_string(*amak_warmup) +
                                                  " is shorter than its largest horizon " +
                                                  std::to_string(amak.warmup()));
    }
    if (uses(StrategyKind::corn_k)) corn_k_agent_config(corn_k, solver).validate();
    if (uses(StrategyKind::eg)) eg.validate();
    if (uses(StrategyKind::crp) && crp_weights) (void)Portfolio(*crp_weights);
}

std::size_t BacktestConfig::warmup(StrategyKind kind) const {
    switch (kind) {
        case StrategyKind::amak: return amak_warmup.value_or(amak.warmup());
        case StrategyKind::corn_k: return corn_k.warmup;
        default: return 0;
    }
}

std::size_t BacktestConfig::common_warmup() const {
    std::size_t w = 0;
    for (auto k : strategies) w = std::max(w, warmup(k));
    return w;
}

const StrategyResult& BacktestResult::get(StrategyKind kind) const {
    for (const auto& s : strategies)
        if (s.kind == kind) return s;
    fail(ErrorCode::invalid_argument, "strategy '" + std::string(to_string(kind)) + "' was not run");
}

namespace {

/// Online decision rule. `begin` sees rows [0, day) and returns the portfolio
/// for row `day`; `observe` is handed rows [0, t] once row t is known and
/// returns the portfolio for row t + 1.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual Portfolio begin(const RelativesView& history) = 0;
    virtual Portfolio observe(const RelativesView& history) = 0;
    virtual std::vector<std::string> drain_log() { return {}; }
};

class AmakStrategy final : public Strategy {
public:
    explicit AmakStrategy(AmakConfig config) : config_(std::move(config)) {}
    Portfolio begin(const RelativesView& history) override {
        agent_ = std::make_unique<Amak>(config_, history);
        return agent_->portfolio();
    }
    Portfolio observe(const RelativesView& history) override { return agent_->step(history); }
    std::vector<std::string> drain_log() override { return agent_ ? agent_->drain_log() : std::vector<std::string>{}; }

private:
    AmakConfig config_;
    std::unique_ptr<Amak> agent_;
};

class CornKStrategy final : public Strategy {
public:
    explicit CornKStrategy(SubAgentConfig config) : config_(std::move(config)) {}
    Portfolio begin(const RelativesView& history) override {
        agent_ = std::make_unique<SubAgent>(config_, history);
        return agent_->portfolio();
    }
    Portfolio observe(const RelativesView& history) override { return agent_->step(history); }

private:
    SubAgentConfig config_;
    std::unique_ptr<SubAgent> agent_;
};

class UbahStrategy final : public Strategy {
public:
    Portfolio begin(const RelativesView& history) override {
        held_ = Portfolio::uniform(history.assets());
        return *held_;
    }
    Portfolio observe(const RelativesView& history) override {
        held_ = drift(*held_, history.row(history.end() - 1));
        return *held_;
    }

private:
    std::optional<Portfolio> held_;
};

class CrpStrategy final : public Strategy {
public:
    explicit CrpStrategy(std::optional<std::vector<double>> weights) : weights_(std::move(weights)) {}
    Portfolio begin(const RelativesView& history) override {
        b_ = weights_ ? Portfolio(*weights_) : Portfolio::uniform(history.assets());
        if (b_->size() != history.assets())
            fail(ErrorCode::invalid_argument, "CRP weights have " + std::to_string(b_->size()) +
                                                  " entries for " + std::to_string(history.assets()) + " assets");
        return *b_;
    }
    Portfolio observe(const RelativesView&) override { return *b_; }

private:
    std::optional<std::vector<double>> weights_;
    std::optional<Portfolio> b_;
};

class EgStrategy final : public Strategy {
public:
    explicit EgStrategy(EgConfig config) : config_(config) {}
    Portfolio begin(const RelativesView& history) override {
        b_ = Portfolio::uniform(history.assets());
        return *b_;
    }
    Portfolio observe(const RelativesView& history) override {
        b_ = eg_step(*b_, history.row(history.end() - 1), config_.eta);
        return *b_;
    }

private:
    EgConfig config_;
    std::optional<Portfolio> b_;
};

class BestStockStrategy final : public Strategy {
public:
    explicit BestStockStrategy(std::size_t asset) : asset_(asset) {}
    Portfolio begin(const RelativesView& history) override { return Portfolio::vertex(history.assets(), asset_); }
    Portfolio observe(const RelativesView& history) override { return Portfolio::vertex(history.assets(), asset_); }

private:
    std::size_t asset_;
};

}  // namespace

BacktestResult run_backtest(const BacktestConfig& config, const PriceRelativeMatrix& relatives, const LogSink& log) {
    config.validate();
    const auto n = relatives.days();
    const auto common = config.common_warmup();
    if (common >= n)
        fail(ErrorCode::insufficient_data, "insufficient data: the selected strategies need at least " +
                                               std::to_string(common + 1) + " days of price relatives (warm-up " +
                                               std::to_string(common) + " plus one evaluated day), have " +
                                               std::to_string(n));

    AmakConfig amak = config.amak;
    for (auto& h : amak.horizons) {
        h.seed = config.seed;
        h.solver = config.solver;
    }

    struct Slot {
        StrategyKind kind;
        std::unique_ptr<Strategy> strategy;
        std::size_t start = 0;
        std::optional<Portfolio> next;
    };
    std::vector<Slot> slots;
    for (auto kind : config.strategies) {
        Slot s{kind, nullptr, 0, std::nullopt};
        switch (kind) {
            case StrategyKind::amak:
                s.strategy = std::make_unique<AmakStrategy>(amak);
                s.start = config.warmup(kind);
                break;
            case StrategyKind::corn_k:
                s.strategy = std::make_unique<CornKStrategy>(corn_k_agent_config(config.corn_k, config.solver));
                s.start = config.warmup(kind);
                break;
            case StrategyKind::ubah: s.strategy = std::make_unique<UbahStrategy>(); break;
            case StrategyKind::crp: s.strategy = std::make_unique<CrpStrategy>(config.crp_weights); break;
            case StrategyKind::eg: s.strategy = std::make_unique<EgStrategy>(config.eg); break;
            case StrategyKind::best_stock:
                s.strategy = std::make_unique<BestStockStrategy>(best_stock(RelativesView(relatives, common, n)));
                break;
        }
        if (s.start == 0) s.start = common;
        slots.push_back(std::move(s));
    }

    BacktestResult result;
    result.warmup = common;
    result.first_day = common + 1;
    result.last_day = n;
    for (const auto& s : slots) result.strategies.push_back(StrategyResult{s.kind, WealthTrajectory{}, {}, {}});

    const auto flush = [&](Slot& s) {
        for (const auto& line : s.strategy->drain_log())
            if (log) log(std::string(to_string(s.kind)) + " " + line);
    };

    std::size_t first = n;
    for (auto& s : slots) {
        s.next = s.strategy->begin(RelativesView(relatives, 0, s.start));
        first = std::min(first, s.start);
        flush(s);
    }

    for (auto r = first; r < n; ++r) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            auto& s = slots[i];
            if (r < s.start) continue;
            if (r >= common) {
                auto& out = result.strategies[i];
                out.trajectory.step(*s.next, relatives.row(r));
                out.portfolios.push_back(*s.next);
            }
            if (r + 1 < n) s.next = s.strategy->observe(RelativesView(relatives, 0, r + 1));
            flush(s);
        }
    }

    for (auto& s : result.strategies) s.metrics = evaluate(s.trajectory, config.sharpe);
    return result;
}

void SyntheticSpec::validate() const {
    if (n_days < 2) fail(ErrorCode::invalid_argument, "synthetic n_days must be at least 2");
    if (m_assets < 2) fail(ErrorCode::invalid_argument, "synthetic m_assets must be at least 2");
    if (!(start_price > 0.0)) fail(ErrorCode::invalid_argument, "synthetic start_price must be positive");
    const auto check = [&](const std::vector<double>& v, const char* what, bool non_negative) {
        if (v.size() != 1 && v.size() != m_assets)
            fail(ErrorCode::invalid_argument, std::string("synthetic ") + what + " needs 1 or m_assets values");
        for (double x : v)
            if (!std::isfinite(x) || (non_negative && x < 0.0))
                fail(ErrorCode::invalid_argument, std::string("invalid synthetic ") + what + " value");
    };
    check(drift, "drift", false);
    check(volatility, "volatility", true);
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        check(regimes[i].drift, "regime drift", false);
        check(regimes[i].volatility, "regime volatility", true);
        if (i > 0 && regimes[i].start_day <= regimes[i - 1].start_day)
            fail(ErrorCode::invalid_argument, "synthetic regimes must have increasing start days");
    }
    int y = 0, mo = 0, d = 0;
    if (std::sscanf(start_date.c_str(), "%4d-%2d-%2d", &y, &mo, &d) != 3 ||
        !std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month(static_cast<unsigned>(mo)),
                                     std::chrono::day(static_cast<unsigned>(d))}
             .ok())
        fail(ErrorCode::invalid_argument, "synthetic start_date must be YYYY-MM-DD");
}

namespace {

double round_to_12_digits(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::vector<std::string> business_days(const std::string& start, std::size_t n) {
    using namespace std::chrono;
    int y = 0, mo = 0, d = 0;
    std::sscanf(start.c_str(), "%4d-%2d-%2d", &y, &mo, &d);
    sys_days day = year{y} / month(static_cast<unsigned>(mo)) / std::chrono::day(static_cast<unsigned>(d));
    std::vector<std::string> out;
    out.reserve(n);
    while (out.size() < n) {
        const weekday wd{day};
        if (wd != Saturday && wd != Sunday) {
            const year_month_day ymd{day};
            char buf[16];
            std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                          static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
            out.emplace_back(buf);
        }
        day += days{1};
    }
    return out;
}

}  // namespace

PriceSeries generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const auto m = spec.m_assets;
    const auto pick = [m](const std::vector<double>& v, std::size_t j) { return v.size() == 1 ? v[0] : v[j]; };

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> prices(spec.n_days * m);
    // exact log-prices drive the walk; only the emitted prices are rounded
    std::vector<double> log_price(m, std::log(spec.start_price));
    for (std::size_t j = 0; j < m; ++j) prices[j] = round_to_12_digits(spec.start_price);

    std::size_t regime = 0;
    const std::vector<double>* drift = &spec.drift;
    const std::vector<double>* vol = &spec.volatility;
    for (std::size_t t = 0; t + 1 < spec.n_days; ++t) {
        while (regime < spec.regimes.size() && spec.regimes[regime].start_day <= t) {
            drift = &spec.regimes[regime].drift;
            vol = &spec.regimes[regime].volatility;
            ++regime;
        }
        for (std::size_t j = 0; j < m; ++j) {
            const double z = normal(rng);
            log_price[j] += pick(*drift, j) + pick(*vol, j) * z;
            prices[(t + 1) * m + j] = round_to_12_digits(std::exp(log_price[j]));
        }
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j) names.push_back("A" + std::to_string(j + 1));
    return PriceSeries(business_days(spec.start_date, spec.n_days), std::move(names), std::move(prices));
}

}  // namespace amak
