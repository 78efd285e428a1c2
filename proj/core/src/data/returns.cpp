#include "allockit/data/returns.hpp"

#include <algorithm>
#include <iterator>

#include "allockit/error.hpp"

namespace allockit::data {

ReturnPanel to_nominal_returns(std::span<const PriceSeries> series) {
    if (series.empty()) throw DataError("no price series supplied");
    for (const auto& s : series) s.validate();

    std::vector<YearMonth> common = series.front().dates;
    for (std::size_t k = 1; k < series.size(); ++k) {
        std::vector<YearMonth> next;
        std::set_intersection(common.begin(), common.end(), series[k].dates.begin(), series[k].dates.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    if (common.empty()) throw DataError("price series share no common dates");
    if (common.size() < 2) throw DataError("price series share only one date; returns need two");

    ReturnPanel panel;
    panel.convention = ReturnConvention::nominal;
    panel.dates.assign(common.begin() + 1, common.end());
    panel.values = numerics::Matrix(panel.dates.size(), series.size());
    for (std::size_t j = 0; j < series.size(); ++j) {
        const auto& s = series[j];
        panel.asset_ids.push_back(s.asset_id);
        std::size_t pos = 0;
        double prev = 0.0;
        for (std::size_t t = 0; t < common.size(); ++t) {
            while (s.dates[pos] != common[t]) ++pos;
            const double price = s.prices[pos];
            if (t > 0) panel.values(t - 1, j) = (price - prev) / prev;
            prev = price;
        }
    }
    return panel;
}

ReturnPanel to_real_returns(const ReturnPanel& nominal, const InflationSeries& inflation) {
    if (nominal.convention != ReturnConvention::nominal) throw DataError("panel is already in real terms");
    inflation.validate();
    ReturnPanel real = nominal;
    real.convention = ReturnConvention::real;
    for (std::size_t t = 0; t < nominal.num_periods(); ++t) {
        const auto rate = inflation.rate_at(nominal.dates[t]);
        if (!rate) throw DataError("missing inflation for month " + nominal.dates[t].to_string());
        if (!(*rate > -1.0)) throw DataError("inflation rate <= -1 for month " + nominal.dates[t].to_string());
        // (1 + r) / (1 + i) - 1 rearranged; exact when i = 0 and free of the 1 + r cancellation
        for (std::size_t j = 0; j < nominal.num_assets(); ++j)
            real.values(t, j) = (nominal.values(t, j) - *rate) / (1.0 + *rate);
    }
    return real;
}

}  // namespace allockit::data
