#pragma once

#include "amak/market_data.hpp"
#include "amak/portfolio.hpp"

#include <optional>
#include <span>
#include <vector>

namespace amak {

struct EgConfig {
    double eta = 0.05;
    void validate() const;
};

// Closed-form wealth paths over every row of `relatives`, starting at S_0 = 1.

/// Uniform buy-and-hold: S_t = (1/m) sum_j prod_{k<=t} x_kj.
WealthTrajectory ubah_trajectory(const RelativesView& relatives);

/// Constant rebalanced portfolio; uniform unless `weights` is given.
WealthTrajectory crp_trajectory(const RelativesView& relatives,
                                const std::optional<Portfolio>& weights = std::nullopt);

/// Hindsight best single asset (lowest index on ties).
WealthTrajectory best_stock_trajectory(const RelativesView& relatives);
std::size_t best_stock(const RelativesView& relatives);

/// Exponentiated-gradient update b'_j proportional to b_j exp(eta x_j / (b . x)).
Portfolio eg_step(const Portfolio& b, std::span<const double> x, double eta);

WealthTrajectory eg_trajectory(const RelativesView& relatives, const EgConfig& config = {});

/// Buy-and-hold drift: after day x the holdings are b_j x_j / (b . x).
Portfolio drift(const Portfolio& b, std::span<const double> x);

}  // namespace amak
