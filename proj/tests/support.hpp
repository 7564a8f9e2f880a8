#pragma once

// Test-side helpers and brute-force oracles. Nothing here calls the code it
// is used to check, except where noted (the CORN-K oracle reuses the
// log-optimal solver, whose own oracle is grid_search_log_optimal).

#include "amak/backtest.hpp"
#include "amak/experts.hpp"
#include "amak/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace amak::testing {

inline PriceRelativeMatrix random_relatives(std::size_t days, std::size_t assets, std::uint64_t seed,
                                            double lo = 0.9, double hi = 1.1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(days * assets);
    for (auto& x : v) x = u(rng);
    return PriceRelativeMatrix(assets, std::move(v));
}

inline PriceRelativeMatrix relatives_from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<double> v;
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    return PriceRelativeMatrix(rows.front().size(), std::move(v));
}

// ---- drawdown ----

/// Minimum over every ordered (peak, trough) pair.
inline double brute_force_mdd(const std::vector<double>& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i; j < s.size(); ++j) worst = std::min(worst, (s[j] - s[i]) / s[i]);
    return worst;
}

// ---- log-optimal portfolio ----

inline double log_growth(const std::vector<double>& b, const std::vector<std::vector<double>>& rows) {
    double total = 0.0;
    for (const auto& x : rows) {
        double g = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) g += b[j] * x[j];
        total += std::log(g);
    }
    return total;
}

struct GridOptimum {
    std::vector<double> weights;
    double log_growth = -std::numeric_limits<double>::infinity();
};

/// Exhaustive search over the simplex at resolution 1/steps, for m <= 3.
inline GridOptimum grid_search_log_optimal(const std::vector<std::vector<double>>& rows, std::size_t steps = 1000) {
    const auto m = rows.front().size();
    GridOptimum best;
    const double h = 1.0 / static_cast<double>(steps);
    auto consider = [&](std::vector<double> b) {
        const double v = log_growth(b, rows);
        if (v > best.log_growth) best = {std::move(b), v};
    };
    if (m == 1) {
        consider({1.0});
    } else if (m == 2) {
        for (std::size_t i = 0; i <= steps; ++i) consider({i * h, 1.0 - i * h});
    } else {
        for (std::size_t i = 0; i <= steps; ++i)
            for (std::size_t j = 0; i + j <= steps; ++j)
                consider({i * h, j * h, static_cast<double>(steps - i - j) * h});
    }
    return best;
}

// ---- correlation similarity ----

inline bool all_equal(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

inline std::vector<double> flatten_rows(const PriceRelativeMatrix& m, std::size_t first, std::size_t count) {
    std::vector<double> out;
    for (std::size_t r = first; r < first + count; ++r)
        for (std::size_t j = 0; j < m.assets(); ++j) out.push_back(m(r, j));
    return out;
}

/// Two-pass textbook Pearson; nullopt when either sample is constant.
inline std::optional<double> naive_pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (all_equal(a) || all_equal(b)) return std::nullopt;
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Rows i in [begin + w, end - 1] whose preceding w rows correlate with the
/// last w rows before `end` at or above rho.
inline std::vector<std::size_t> exhaustive_similar_days(const PriceRelativeMatrix& m, std::size_t begin,
                                                        std::size_t end, std::size_t w, double rho) {
    std::vector<std::size_t> days;
    if (end < begin + w + 1) return days;
    const auto current = flatten_rows(m, end - w, w);
    for (std::size_t i = begin + w; i < end; ++i) {
        const auto c = naive_pearson(flatten_rows(m, i - w, w), current);
        if (c && *c >= rho) days.push_back(i);
    }
    return days;
}

// ---- CORN-K ----

struct CornOracleResult {
    std::vector<double> wealth;                  ///< S_0 = 1, then one value per day
    std::vector<std::vector<double>> portfolios; ///< portfolio held on each traded row
};

/// Plain CORN-K over the whole visible history: W*(P-1) experts, uniform on
/// an empty similar set, top-K mean by cumulative expert wealth. Trades rows
/// [warmup, end); expert wealth starts counting at the first traded row.
inline CornOracleResult corn_k_oracle(const PriceRelativeMatrix& x, std::size_t warmup, std::size_t max_window,
                                      std::size_t p, std::size_t k, const LogOptimalOptions& solver = {}) {
    const auto m = x.assets();
    struct Expert {
        std::size_t w;
        double rho;
        double wealth = 1.0;
        std::vector<double> b;
    };
    std::vector<Expert> experts;
    for (std::size_t w = 1; w <= max_window; ++w)
        for (std::size_t i = 1; i < p; ++i)
            experts.push_back({w, static_cast<double>(i) / static_cast<double>(p), 1.0, {}});

    auto choose = [&](Expert& e, std::size_t end) {
        const auto days = exhaustive_similar_days(x, 0, end, e.w, e.rho);
        if (days.empty()) {
            e.b.assign(m, 1.0 / static_cast<double>(m));
            return;
        }
        std::vector<double> rows;
        for (auto d : days)
            for (std::size_t j = 0; j < m; ++j) rows.push_back(x(d, j));
        const auto solved = solve_log_optimal(rows, m, solver);
        e.b.assign(solved.portfolio.weights().begin(), solved.portfolio.weights().end());
    };

    CornOracleResult out;
    out.wealth.push_back(1.0);
    for (auto& e : experts) choose(e, warmup);
    for (std::size_t t = warmup; t < x.days(); ++t) {
        std::vector<std::size_t> order(experts.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return experts[a].wealth > experts[b].wealth; });
        std::vector<double> combined(m, 0.0);
        const auto kk = std::min(k, experts.size());
        for (std::size_t r = 0; r < kk; ++r)
            for (std::size_t j = 0; j < m; ++j) combined[j] += experts[order[r]].b[j] / static_cast<double>(kk);
        double g = 0.0;
        for (std::size_t j = 0; j < m; ++j) g += combined[j] * x(t, j);
        out.wealth.push_back(out.wealth.back() * g);
        out.portfolios.push_back(combined);
        for (auto& e : experts) {
            double eg = 0.0;
            for (std::size_t j = 0; j < m; ++j) eg += e.b[j] * x(t, j);
            e.wealth *= eg;
            choose(e, t + 1);
        }
    }
    return out;
}

// ---- regime market ----

/// Three assets. Most days every asset moves by the same factor (1.001 in
/// regime A, 0.999 in regime B), so any window made only of such days has
/// zero variance and no defined correlation. Every `jump_every`-th day the
/// regime's favoured asset (0 in A, 1 in B) jumps while the others dip.
/// Regimes alternate every `regime_length` days; keeping that a multiple of
/// `jump_every` means no pre-jump window straddles a regime switch.
inline PriceRelativeMatrix regime_market(std::size_t days, std::size_t regime_length = 48,
                                         std::size_t jump_every = 6) {
    std::vector<double> v;
    v.reserve(days * 3);
    for (std::size_t t = 0; t < days; ++t) {
        const bool regime_a = (t / regime_length) % 2 == 0;
        const bool jump = t % jump_every == jump_every - 1;
        for (std::size_t j = 0; j < 3; ++j) {
            double r = regime_a ? 1.001 : 0.999;
            if (jump) r = (j == (regime_a ? 0u : 1u)) ? 1.05 : 0.98;
            v.push_back(r);
        }
    }
    return PriceRelativeMatrix(3, std::move(v));
}

}  // namespace amak::testing
