#pragma once

#include <span>

#include "allockit/data/series.hpp"

namespace allockit::data {

/// Net returns (P_t − P_{t−1}) / P_{t−1} over the inner join of all series' dates.
/// The first joined month only anchors the first return, so the panel has one row fewer
/// than the intersection. No interpolation or forward-fill.
ReturnPanel to_nominal_returns(std::span<const PriceSeries> series);

/// Deflates a nominal panel: (1 + r) / (1 + i) − 1 for each cell, using the inflation rate of
/// the same month. Throws DataError naming the first month with no inflation observation.
ReturnPanel to_real_returns(const ReturnPanel& nominal, const InflationSeries& inflation);

}  // namespace allockit::data
