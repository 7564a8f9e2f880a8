#include "amak/portfolio.hpp"

#include "amak/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace amak {

Portfolio::Portfolio(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) fail(ErrorCode::invalid_argument, "portfolio needs at least one asset");
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            fail(ErrorCode::invalid_argument, "portfolio weight must be finite and non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        if (std::abs(sum - 1.0) > kRenormaliseTolerance)
            fail(ErrorCode::invalid_argument, "portfolio weights sum to " + std::to_string(sum));
        for (double& w : weights_) w /= sum;
    }
}

Portfolio Portfolio::uniform(std::size_t m) {
    if (m == 0) fail(ErrorCode::invalid_argument, "uniform portfolio over zero assets");
    return Portfolio(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

Portfolio Portfolio::vertex(std::size_t m, std::size_t asset) {
    if (asset >= m) fail(ErrorCode::invalid_argument, "vertex asset out of range");
    std::vector<double> w(m, 0.0);
    w[asset] = 1.0;
    return Portfolio(std::move(w));
}

double Portfolio::growth(std::span<const double> relatives) const {
    if (relatives.size() != weights_.size())
        fail(ErrorCode::invalid_argument, "portfolio has " + std::to_string(weights_.size()) +
                                              " weights but relatives row has " +
                                              std::to_string(relatives.size()));
    return std::inner_product(weights_.begin(), weights_.end(), relatives.begin(), 0.0);
}

Portfolio uniform_portfolio(std::size_t m) { return Portfolio::uniform(m); }

double wealth_step(double wealth, const Portfolio& b, std::span<const double> x) {
    return wealth * b.growth(x);
}

Portfolio merge_portfolios(std::span<const Portfolio> ports) {
    if (ports.empty()) fail(ErrorCode::invalid_argument, "cannot merge an empty portfolio list");
    const auto m = ports.front().size();
    std::vector<double> acc(m, 0.0);
    for (const auto& p : ports) {
        if (p.size() != m) fail(ErrorCode::invalid_argument, "portfolio dimension mismatch in merge");
        for (std::size_t j = 0; j < m; ++j) acc[j] += p[j];
    }
    for (double& a : acc) a /= static_cast<double>(ports.size());
    return Portfolio(std::move(acc));
}

WealthTrajectory::WealthTrajectory(double initial) {
    if (!(initial > 0.0)) fail(ErrorCode::invalid_argument, "initial wealth must be positive");
    values_.push_back(initial);
}

void WealthTrajectory::step(const Portfolio& b, std::span<const double> x) {
    push(wealth_step(values_.back(), b, x));
}

void WealthTrajectory::push(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        fail(ErrorCode::internal, "wealth must stay positive and finite");
    values_.push_back(value);
}

}  // namespace amak
