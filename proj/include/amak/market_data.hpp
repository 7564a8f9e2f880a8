#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace amak {

/// Adjusted close prices, one row per date and one column per asset.
/// Construction validates: positive finite prices, strictly increasing
/// dates, rectangular shape.
class PriceSeries {
public:
    PriceSeries(std::vector<std::string> dates, std::vector<std::string> asset_names,
                std::vector<double> prices_row_major);

    std::size_t days() const noexcept { return dates_.size(); }
    std::size_t assets() const noexcept { return names_.size(); }

    double price(std::size_t day, std::size_t asset) const {
        return prices_[day * names_.size() + asset];
    }
    std::span<const double> row(std::size_t day) const {
        return {prices_.data() + day * names_.size(), names_.size()};
    }

    const std::vector<std::string>& dates() const noexcept { return dates_; }
    const std::vector<std::string>& asset_names() const noexcept { return names_; }
    const std::vector<double>& values() const noexcept { return prices_; }

private:
    std::vector<std::string> dates_;
    std::vector<std::string> names_;
    std::vector<double> prices_;
};

/// Gross price relatives x[t][j] = P(t+1, j) / P(t, j). Row t of this matrix
/// is "day t+1" in the 1-based day numbering used by logs and reports.
class PriceRelativeMatrix {
public:
    PriceRelativeMatrix(std::size_t assets, std::vector<double> relatives_row_major);

    std::size_t days() const noexcept { return assets_ ? data_.size() / assets_ : 0; }
    std::size_t assets() const noexcept { return assets_; }

    double operator()(std::size_t day, std::size_t asset) const {
        return data_[day * assets_ + asset];
    }
    std::span<const double> row(std::size_t day) const {
        return {data_.data() + day * assets_, assets_};
    }
    const std::vector<double>& values() const noexcept { return data_; }

private:
    std::size_t assets_ = 0;
    std::vector<double> data_;
};

/// Read-only view of rows [begin, end) of a relatives matrix. Strategies only
/// ever receive views ending at the last observed day, which is what keeps
/// portfolio selection causal.
class RelativesView {
public:
    RelativesView() = default;
    RelativesView(const PriceRelativeMatrix& m, std::size_t begin, std::size_t end);
    explicit RelativesView(const PriceRelativeMatrix& m)
        : RelativesView(m, 0, m.days()) {}

    std::size_t begin() const noexcept { return begin_; }
    std::size_t end() const noexcept { return end_; }
    std::size_t size() const noexcept { return end_ - begin_; }
    std::size_t assets() const noexcept { return matrix_ ? matrix_->assets() : 0; }

    /// Absolute row index, must lie in [begin, end).
    std::span<const double> row(std::size_t day) const;
    double operator()(std::size_t day, std::size_t asset) const { return row(day)[asset]; }

    /// Same matrix, narrower range; the new range must nest inside this one.
    RelativesView sub(std::size_t begin, std::size_t end) const;

    const PriceRelativeMatrix& matrix() const noexcept { return *matrix_; }

private:
    const PriceRelativeMatrix* matrix_ = nullptr;
    std::size_t begin_ = 0;
    std::size_t end_ = 0;
};

/// w consecutive relatives rows, [last - w + 1, last].
struct MarketWindow {
    RelativesView data;

    MarketWindow(const RelativesView& history, std::size_t last_day, std::size_t w);
    std::size_t first() const noexcept { return data.begin(); }
    std::size_t last() const noexcept { return data.end() - 1; }
    std::size_t size() const noexcept { return data.size(); }
};

using Features = std::array<double, 4>;

/// Four-feature summary of a market window:
/// [sum of per-asset means, whole-window mean,
///  sum of per-asset population variances, whole-window population variance].
struct MarketVector {
    Features v{};
    std::size_t window_size = 0;
    std::size_t day = 0;  ///< last row of the summarised window
};

struct CsvFormat {
    char delimiter = ',';
};

PriceSeries load_prices(const std::filesystem::path& path, const CsvFormat& format = {});
PriceSeries parse_prices(std::string_view text, const CsvFormat& format = {});

/// Writes the ingestion format with 12 significant digits. Every line in
/// `comments` is emitted first with a leading "# ".
void write_prices(const PriceSeries& series, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});
std::string format_prices(const PriceSeries& series,
                          const std::vector<std::string>& comments = {});

PriceRelativeMatrix compute_relatives(const PriceSeries& series);

MarketVector market_vector(const MarketWindow& window);

/// One vector per window ending in [range.begin() + w - 1, range.end() - 1],
/// ordered by day. Empty when the range holds fewer than w rows.
std::vector<MarketVector> window_vectors(const RelativesView& range, std::size_t w);

}  // namespace amak
