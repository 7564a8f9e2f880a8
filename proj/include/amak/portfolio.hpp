#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace amak {

/// A point on the probability simplex: non-negative weights summing to 1.
class Portfolio {
public:
    /// Weights whose sum is within 1e-6 of 1 are renormalised; anything
    /// further off, or any negative / non-finite weight, is rejected.
    explicit Portfolio(std::vector<double> weights);

    static Portfolio uniform(std::size_t m);
    static Portfolio vertex(std::size_t m, std::size_t asset);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t j) const { return weights_[j]; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Gross one-day return b . x.
    double growth(std::span<const double> relatives) const;

    friend bool operator==(const Portfolio&, const Portfolio&) = default;

private:
    std::vector<double> weights_;
};

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kRenormaliseTolerance = 1e-6;

Portfolio uniform_portfolio(std::size_t m);

/// S * (b . x).
double wealth_step(double wealth, const Portfolio& b, std::span<const double> x);

/// Component-wise mean of equally sized portfolios.
Portfolio merge_portfolios(std::span<const Portfolio> ports);

/// Wealth S_0..S_n together with the portfolios that produced each step.
class WealthTrajectory {
public:
    explicit WealthTrajectory(double initial = 1.0);

    void step(const Portfolio& b, std::span<const double> x);
    /// Appends a value computed elsewhere (closed-form baselines).
    void push(double value);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const { return values_[t]; }
    double initial() const noexcept { return values_.front(); }
    double terminal() const noexcept { return values_.back(); }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

}  // namespace amak
