#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allockit/numerics/matrix.hpp"

namespace allockit::data {

/// Calendar month, formatted as `YYYY-MM`.
struct YearMonth {
    int year = 0;
    int month = 1;

    /// Throws DataError unless `text` is exactly `YYYY-MM` with month 01..12.
    static YearMonth parse(std::string_view text);
    std::string to_string() const;
    YearMonth next() const;

    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

struct PriceSeries {
    std::string asset_id;
    std::vector<YearMonth> dates;
    std::vector<double> prices;

    std::size_t size() const noexcept { return dates.size(); }
    /// Strictly increasing dates, positive prices, at least two observations.
    void validate() const;
};

struct InflationSeries {
    std::vector<YearMonth> dates;
    std::vector<double> rates;

    std::size_t size() const noexcept { return dates.size(); }
    void validate() const;
    std::optional<double> rate_at(YearMonth month) const;
};

enum class ReturnConvention { nominal, real };

std::string_view to_string(ReturnConvention c);

/// T×N panel of per-period net returns; row t is `dates[t]`, column j is `asset_ids[j]`.
struct ReturnPanel {
    std::vector<std::string> asset_ids;
    std::vector<YearMonth> dates;
    numerics::Matrix values;
    ReturnConvention convention = ReturnConvention::nominal;

    std::size_t num_assets() const noexcept { return asset_ids.size(); }
    std::size_t num_periods() const noexcept { return dates.size(); }

    std::span<const double> row(std::size_t t) const { return values.row(t); }
    std::vector<double> column(std::size_t j) const { return values.column(j); }

    std::optional<std::size_t> index_of(std::string_view asset_id) const;

    /// Gross view (1 + r) of the same panel.
    numerics::Matrix gross() const;

    /// Copy restricted to `ids`, in that order. Throws DataError for unknown ids.
    ReturnPanel select(std::span<const std::string> ids) const;
    ReturnPanel without(std::string_view asset_id) const;
    /// Rows [first, first + count).
    ReturnPanel slice(std::size_t first, std::size_t count) const;

    /// No missing cells, every value > -1, N ≥ 1, T ≥ 2, strictly increasing dates.
    void validate() const;
    /// Labels, shape, date order and finiteness only; values may lie anywhere on the real line.
    void validate_shape() const;
};

}  // namespace allockit::data
