#include "amak/metrics.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace amak {

SharpeMode parse_sharpe_mode(std::string_view text) {
    if (text == "fixed" || text == "fixed-sigma" || text == "fixed_sigma") return SharpeMode::fixed_sigma;
    if (text == "realized" || text == "realized-vol" || text == "realized_vol") return SharpeMode::realized_vol;
    fail(ErrorCode::invalid_argument, "unknown Sharpe mode '" + std::string(text) + "'");
}

std::string_view to_string(SharpeMode mode) {
    return mode == SharpeMode::fixed_sigma ? "fixed-sigma" : "realized-vol";
}

double mdd(std::span<const double> wealth) {
    if (wealth.empty()) fail(ErrorCode::invalid_argument, "drawdown of an empty trajectory");
    double peak = wealth[0];
    double worst = 0.0;
    for (double s : wealth) {
        peak = std::max(peak, s);
        worst = std::min(worst, (s - peak) / peak);
    }
    return worst;
}

double apy(std::span<const double> wealth) {
    if (wealth.size() < 2) fail(ErrorCode::invalid_argument, "APY needs at least two wealth values");
    const double years = static_cast<double>(wealth.size() - 1) / kTradingDaysPerYear;
    return std::pow(wealth.back() / wealth.front(), 1.0 / years) - 1.0;
}

double asr(double apy_value, SharpeMode mode, std::span<const double> daily_returns) {
    if (mode == SharpeMode::fixed_sigma) return (apy_value - kRiskFreeRate) / std::sqrt(kTradingDaysPerYear);

    if (daily_returns.size() < 2) fail(ErrorCode::invalid_argument, "realized-vol Sharpe needs at least 2 returns");
    double mean = 0.0;
    for (double r : daily_returns) mean += r;
    mean /= static_cast<double>(daily_returns.size());
    double ss = 0.0;
    for (double r : daily_returns) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(daily_returns.size() - 1));
    if (!(sd > 0.0)) fail(ErrorCode::invalid_argument, "realized-vol Sharpe undefined for zero volatility");
    return (apy_value - kRiskFreeRate) / (sd * std::sqrt(kTradingDaysPerYear));
}

MetricReport evaluate(const WealthTrajectory& trajectory, SharpeMode mode) {
    MetricReport r;
    const auto& v = trajectory.values();
    r.n_days = v.size() - 1;
    r.years = static_cast<double>(r.n_days) / kTradingDaysPerYear;
    r.mdd = mdd(v);
    r.apy = apy(v);
    if (mode == SharpeMode::realized_vol) {
        std::vector<double> rets;
        rets.reserve(r.n_days);
        for (std::size_t t = 1; t < v.size(); ++t) rets.push_back(v[t] / v[t - 1] - 1.0);
        r.asr = asr(r.apy, mode, rets);
    } else {
        r.asr = asr(r.apy, mode);
    }
    return r;
}

}  // namespace amak
