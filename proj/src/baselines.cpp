#include "amak/baselines.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <cmath>

namespace amak {

void EgConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::invalid_argument, "EG learning rate must be positive");
}

namespace {

void require_days(const RelativesView& relatives) {
    if (relatives.size() == 0) fail(ErrorCode::insufficient_data, "baseline needs at least one day of relatives");
}

}  // namespace

WealthTrajectory ubah_trajectory(const RelativesView& relatives) {
    require_days(relatives);
    const auto m = relatives.assets();
    std::vector<double> growth(m, 1.0);
    WealthTrajectory out;
    for (auto t = relatives.begin(); t < relatives.end(); ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            growth[j] *= relatives(t, j);
            s += growth[j];
        }
        out.push(s / static_cast<double>(m));
    }
    return out;
}

WealthTrajectory crp_trajectory(const RelativesView& relatives, const std::optional<Portfolio>& weights) {
    require_days(relatives);
    const auto b = weights.value_or(Portfolio::uniform(relatives.assets()));
    WealthTrajectory out;
    for (auto t = relatives.begin(); t < relatives.end(); ++t) out.step(b, relatives.row(t));
    return out;
}

std::size_t best_stock(const RelativesView& relatives) {
    require_days(relatives);
    const auto m = relatives.assets();
    // Compare in log space so long horizons cannot overflow.
    std::vector<double> logs(m, 0.0);
    for (auto t = relatives.begin(); t < relatives.end(); ++t)
        for (std::size_t j = 0; j < m; ++j) logs[j] += std::log(relatives(t, j));
    return static_cast<std::size_t>(std::max_element(logs.begin(), logs.end()) - logs.begin());
}

WealthTrajectory best_stock_trajectory(const RelativesView& relatives) {
    const auto best = best_stock(relatives);
    WealthTrajectory out;
    double s = 1.0;
    for (auto t = relatives.begin(); t < relatives.end(); ++t) {
        s *= relatives(t, best);
        out.push(s);
    }
    return out;
}

Portfolio eg_step(const Portfolio& b, std::span<const double> x, double eta) {
    const double bx = b.growth(x);
    const auto m = b.size();
    // Shift exponents by their max so the normalisation cannot overflow.
    double top = 0.0;
    for (std::size_t j = 0; j < m; ++j) top = std::max(top, eta * x[j] / bx);
    std::vector<double> w(m);
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        w[j] = b[j] * std::exp(eta * x[j] / bx - top);
        z += w[j];
    }
    for (double& v : w) v /= z;
    return Portfolio(std::move(w));
}

WealthTrajectory eg_trajectory(const RelativesView& relatives, const EgConfig& config) {
    require_days(relatives);
    config.validate();
    auto b = Portfolio::uniform(relatives.assets());
    WealthTrajectory out;
    for (auto t = relatives.begin(); t < relatives.end(); ++t) {
        out.step(b, relatives.row(t));
        b = eg_step(b, relatives.row(t), config.eta);
    }
    return out;
}

Portfolio drift(const Portfolio& b, std::span<const double> x) {
    const double bx = b.growth(x);
    std::vector<double> w(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) w[j] = b[j] * x[j] / bx;
    return Portfolio(std::move(w));
}

}  // namespace amak
