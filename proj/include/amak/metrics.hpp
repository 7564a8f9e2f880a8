#pragma once

#include "amak/portfolio.hpp"

#include <span>
#include <string_view>

namespace amak {

inline constexpr double kTradingDaysPerYear = 252.0;
inline constexpr double kRiskFreeRate = 0.04;

enum class SharpeMode {
    fixed_sigma,  ///< sigma_p fixed at sqrt(252)
    realized_vol,    ///< sigma_p = sample std of daily returns * sqrt(252)
};

SharpeMode parse_sharpe_mode(std::string_view text);
std::string_view to_string(SharpeMode mode);

struct MetricReport {
    double mdd = 0.0;   ///< maximum drawdown as a negative fraction, in (-1, 0]
    double apy = 0.0;
    double asr = 0.0;
    std::size_t n_days = 0;
    double years = 0.0;
};

/// min_t (S_t - max_{tau<=t} S_tau) / max_{tau<=t} S_tau.
double mdd(std::span<const double> wealth);
inline double mdd(const WealthTrajectory& t) { return mdd(t.values()); }

/// (S_n / S_0)^(1/y) - 1 with y = n_days / 252, n_days = size - 1.
double apy(std::span<const double> wealth);
inline double apy(const WealthTrajectory& t) { return apy(t.values()); }

/// (apy - 0.04) / sigma_p. `daily_returns` is only read in realized mode.
double asr(double apy_value, SharpeMode mode = SharpeMode::fixed_sigma,
           std::span<const double> daily_returns = {});

MetricReport evaluate(const WealthTrajectory& trajectory, SharpeMode mode = SharpeMode::fixed_sigma);

}  // namespace amak
