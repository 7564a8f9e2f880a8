#include "amak/market_data.hpp"

#include "amak/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace amak {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

bool is_iso_date(std::string_view s) {
    if (s.size() < 10) return false;
    for (std::size_t i = 0; i < 10; ++i) {
        const bool dash = (i == 4 || i == 7);
        if (dash ? s[i] != '-' : !std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (s[i] - '0');
        return v;
    };
    const std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(num(8, 2))}};
    if (!ymd.ok()) return false;
    return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

std::string format_g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<std::string> dates, std::vector<std::string> asset_names,
                         std::vector<double> prices_row_major)
    : dates_(std::move(dates)), names_(std::move(asset_names)), prices_(std::move(prices_row_major)) {
    if (names_.empty()) fail(ErrorCode::data, "price series needs at least one asset");
    if (prices_.size() != dates_.size() * names_.size())
        fail(ErrorCode::data, "price matrix shape does not match dates x assets");
    for (std::size_t t = 0; t < dates_.size(); ++t) {
        if (t > 0 && !(dates_[t - 1] < dates_[t]))
            fail(ErrorCode::data, "dates not strictly increasing at row " + std::to_string(t + 1) +
                                      " ('" + dates_[t - 1] + "' then '" + dates_[t] + "')");
        for (std::size_t j = 0; j < names_.size(); ++j) {
            const double p = prices_[t * names_.size() + j];
            if (!std::isfinite(p) || p <= 0.0)
                fail(ErrorCode::data, "non-positive price at row " + std::to_string(t + 1) +
                                          ", column '" + names_[j] + "'");
        }
    }
}

PriceRelativeMatrix::PriceRelativeMatrix(std::size_t assets, std::vector<double> relatives_row_major)
    : assets_(assets), data_(std::move(relatives_row_major)) {
    if (assets_ == 0) fail(ErrorCode::invalid_argument, "relatives need at least one asset");
    if (data_.size() % assets_ != 0)
        fail(ErrorCode::invalid_argument, "relatives size is not a multiple of the asset count");
    for (double x : data_)
        if (!std::isfinite(x) || x <= 0.0)
            fail(ErrorCode::data, "price relatives must be positive and finite");
}

RelativesView::RelativesView(const PriceRelativeMatrix& m, std::size_t begin, std::size_t end)
    : matrix_(&m), begin_(begin), end_(end) {
    if (begin > end || end > m.days())
        fail(ErrorCode::invalid_argument, "relatives view out of range");
}

std::span<const double> RelativesView::row(std::size_t day) const {
    if (day < begin_ || day >= end_)
        fail(ErrorCode::internal, "row " + std::to_string(day) + " outside visible history [" +
                                      std::to_string(begin_) + ", " + std::to_string(end_) + ")");
    return matrix_->row(day);
}

RelativesView RelativesView::sub(std::size_t begin, std::size_t end) const {
    if (begin < begin_ || end > end_ || begin > end)
        fail(ErrorCode::internal, "sub-view escapes its parent range");
    return RelativesView(*matrix_, begin, end);
}

MarketWindow::MarketWindow(const RelativesView& history, std::size_t last_day, std::size_t w)
    : data([&] {
          if (w == 0) fail(ErrorCode::invalid_argument, "market window size must be positive");
          if (last_day + 1 < w) fail(ErrorCode::invalid_argument, "market window starts before day 0");
          return history.sub(last_day + 1 - w, last_day + 1);
      }()) {}

PriceSeries parse_prices(std::string_view text, const CsvFormat& format) {
    std::vector<std::string> header;
    std::vector<std::string> dates;
    std::vector<double> prices;
    std::size_t line_no = 0;
    std::size_t data_row = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (trim(line).empty() || line.front() == '#') continue;

        auto cells = split(line, format.delimiter);
        if (header.empty()) {
            if (cells.size() < 3)
                fail(ErrorCode::data, "header must name a date column and at least 2 asset columns");
            for (auto c : cells) header.emplace_back(c);
            continue;
        }
        ++data_row;
        const std::string where = "row " + std::to_string(data_row) + " (line " + std::to_string(line_no) + ")";
        if (cells.size() != header.size())
            fail(ErrorCode::data, "wrong number of columns at " + where + ": expected " +
                                      std::to_string(header.size()) + ", got " + std::to_string(cells.size()));
        if (!is_iso_date(cells[0]))
            fail(ErrorCode::data, "invalid ISO-8601 date '" + std::string(cells[0]) + "' at " + where);
        dates.emplace_back(cells[0]);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            const auto cell = cells[j];
            if (cell.empty())
                fail(ErrorCode::data, "missing value at " + where + ", column '" + header[j] + "'");
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                fail(ErrorCode::data, "unparseable value '" + std::string(cell) + "' at " + where +
                                          ", column '" + header[j] + "'");
            if (!std::isfinite(v) || v <= 0.0)
                fail(ErrorCode::data, "non-positive price at " + where + ", column '" + header[j] + "'");
            prices.push_back(v);
        }
        if (dates.size() >= 2 && !(dates[dates.size() - 2] < dates.back()))
            fail(ErrorCode::data, (dates[dates.size() - 2] == dates.back() ? "duplicate date '"
                                                                            : "unsorted date '") +
                                      dates.back() + "' at " + where);
    }
    if (header.empty()) fail(ErrorCode::data, "CSV has no header row");

    std::vector<std::string> names(header.begin() + 1, header.end());
    return PriceSeries(std::move(dates), std::move(names), std::move(prices));
}

PriceSeries load_prices(const std::filesystem::path& path, const CsvFormat& format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open price file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_prices(buf.str(), format);
}

std::string format_prices(const PriceSeries& series, const std::vector<std::string>& comments) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "date";
    for (const auto& n : series.asset_names()) out += "," + n;
    out += "\n";
    for (std::size_t t = 0; t < series.days(); ++t) {
        out += series.dates()[t];
        for (double p : series.row(t)) out += "," + format_g12(p);
        out += "\n";
    }
    return out;
}

void write_prices(const PriceSeries& series, const std::filesystem::path& path,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
    out << format_prices(series, comments);
    if (!out) fail(ErrorCode::io, "write failed for '" + path.string() + "'");
}

PriceRelativeMatrix compute_relatives(const PriceSeries& series) {
    if (series.days() < 2) fail(ErrorCode::insufficient_data, "need at least 2 price rows to form relatives");
    const std::size_t m = series.assets();
    std::vector<double> rel((series.days() - 1) * m);
    for (std::size_t t = 0; t + 1 < series.days(); ++t)
        for (std::size_t j = 0; j < m; ++j) rel[t * m + j] = series.price(t + 1, j) / series.price(t, j);
    return PriceRelativeMatrix(m, std::move(rel));
}

MarketVector market_vector(const MarketWindow& window) {
    const auto w = window.size();
    if (w == 0) fail(ErrorCode::invalid_argument, "empty market window");
    const auto m = window.data.assets();
    const double wd = static_cast<double>(w);

    double total = 0.0;
    double sum_of_means = 0.0;
    double sum_of_vars = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (auto k = window.first(); k <= window.last(); ++k) s += window.data(k, j);
        const double mu = s / wd;
        double ss = 0.0;
        for (auto k = window.first(); k <= window.last(); ++k) {
            const double d = window.data(k, j) - mu;
            ss += d * d;
        }
        total += s;
        sum_of_means += mu;
        sum_of_vars += ss / wd;
    }
    const double n = wd * static_cast<double>(m);
    const double grand_mean = total / n;
    double gss = 0.0;
    for (auto k = window.first(); k <= window.last(); ++k)
        for (double x : window.data.row(k)) gss += (x - grand_mean) * (x - grand_mean);

    return MarketVector{{sum_of_means, grand_mean, sum_of_vars, gss / n}, w, window.last()};
}

std::vector<MarketVector> window_vectors(const RelativesView& range, std::size_t w) {
    if (w == 0) fail(ErrorCode::invalid_argument, "window size must be positive");
    std::vector<MarketVector> out;
    if (range.size() < w) return out;
    out.reserve(range.size() - w + 1);
    for (auto last = range.begin() + w - 1; last < range.end(); ++last)
        out.push_back(market_vector(MarketWindow(range, last, w)));
    return out;
}

}  // namespace amak
