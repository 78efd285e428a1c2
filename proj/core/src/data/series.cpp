#include "allockit/data/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "allockit/error.hpp"

namespace allockit::data {

YearMonth YearMonth::parse(std::string_view text) {
    auto fail = [&] { return DataError("invalid year-month '" + std::string(text) + "' (expected YYYY-MM)"); };
    if (text.size() != 7 || text[4] != '-') throw fail();
    YearMonth ym;
    auto [p1, e1] = std::from_chars(text.data(), text.data() + 4, ym.year);
    auto [p2, e2] = std::from_chars(text.data() + 5, text.data() + 7, ym.month);
    if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + 4 || p2 != text.data() + 7) throw fail();
    if (ym.month < 1 || ym.month > 12) throw fail();
    return ym;
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::next() const {
    return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
}

namespace {

void require_increasing(const std::vector<YearMonth>& dates, const std::string& what) {
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw DataError(what + ": dates not strictly increasing at " + dates[i].to_string());
}

}  // namespace

void PriceSeries::validate() const {
    if (dates.size() != prices.size()) throw DataError(asset_id + ": dates and prices differ in length");
    if (dates.size() < 2) throw DataError(asset_id + ": at least 2 observations required");
    require_increasing(dates, asset_id);
    for (std::size_t i = 0; i < prices.size(); ++i)
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
            throw DataError(asset_id + ": non-positive price at " + dates[i].to_string());
}

void InflationSeries::validate() const {
    if (dates.size() != rates.size()) throw DataError("inflation: dates and rates differ in length");
    require_increasing(dates, "inflation");
    for (std::size_t i = 0; i < rates.size(); ++i)
        if (!(rates[i] > -1.0) || !std::isfinite(rates[i]))
            throw DataError("inflation rate must exceed -1 at " + dates[i].to_string());
}

std::optional<double> InflationSeries::rate_at(YearMonth month) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), month);
    if (it == dates.end() || *it != month) return std::nullopt;
    return rates[static_cast<std::size_t>(it - dates.begin())];
}

std::string_view to_string(ReturnConvention c) {
    return c == ReturnConvention::nominal ? "nominal" : "real";
}

std::optional<std::size_t> ReturnPanel::index_of(std::string_view asset_id) const {
    const auto it = std::find(asset_ids.begin(), asset_ids.end(), asset_id);
    if (it == asset_ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - asset_ids.begin());
}

numerics::Matrix ReturnPanel::gross() const {
    numerics::Matrix g = values;
    for (std::size_t t = 0; t < g.rows(); ++t)
        for (double& v : g.row(t)) v += 1.0;
    return g;
}

ReturnPanel ReturnPanel::select(std::span<const std::string> ids) const {
    ReturnPanel out;
    out.dates = dates;
    out.convention = convention;
    out.values = numerics::Matrix(num_periods(), ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const auto j = index_of(ids[k]);
        if (!j) throw DataError("asset '" + ids[k] + "' not present in panel");
        out.asset_ids.push_back(ids[k]);
        for (std::size_t t = 0; t < num_periods(); ++t) out.values(t, k) = values(t, *j);
    }
    return out;
}

ReturnPanel ReturnPanel::without(std::string_view asset_id) const {
    if (!index_of(asset_id)) throw DataError("asset '" + std::string(asset_id) + "' not present in panel");
    std::vector<std::string> keep;
    for (const auto& id : asset_ids)
        if (id != asset_id) keep.push_back(id);
    return select(keep);
}

ReturnPanel ReturnPanel::slice(std::size_t first, std::size_t count) const {
    if (first + count > num_periods()) throw DataError("panel slice out of range");
    ReturnPanel out;
    out.asset_ids = asset_ids;
    out.convention = convention;
    out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(first),
                     dates.begin() + static_cast<std::ptrdiff_t>(first + count));
    out.values = numerics::Matrix(count, num_assets());
    for (std::size_t t = 0; t < count; ++t)
        for (std::size_t j = 0; j < num_assets(); ++j) out.values(t, j) = values(first + t, j);
    return out;
}

void ReturnPanel::validate_shape() const {
    if (asset_ids.empty()) throw DataError("return panel has no assets");
    if (dates.size() < 2) throw DataError("return panel needs at least 2 periods");
    if (values.rows() != dates.size() || values.cols() != asset_ids.size())
        throw DataError("return panel shape does not match its labels");
    require_increasing(dates, "return panel");
    for (std::size_t t = 0; t < values.rows(); ++t)
        for (std::size_t j = 0; j < values.cols(); ++j)
            if (!std::isfinite(values(t, j)))
                throw DataError("missing return for " + asset_ids[j] + " at " + dates[t].to_string());
}

void ReturnPanel::validate() const {
    validate_shape();
    for (std::size_t t = 0; t < values.rows(); ++t)
        for (std::size_t j = 0; j < values.cols(); ++j)
            if (!(values(t, j) > -1.0))
                throw DataError("return <= -1 for " + asset_ids[j] + " at " + dates[t].to_string());
}

}  // namespace allockit::data
