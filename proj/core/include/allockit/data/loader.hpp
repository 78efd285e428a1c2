#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "allockit/data/series.hpp"

namespace allockit::data {

/// Reads a price CSV whose first column is `date` (YYYY-MM) followed by one column per
/// asset. Series come back in file column order. When `schema` is non-empty only the named
/// columns are returned, in schema order.
///
/// Errors (DataError) carry the 1-based file line: missing file, bad date, duplicate or
/// decreasing dates, ragged rows, unparseable cells, non-positive prices, unknown columns.
std::vector<PriceSeries> load_price_csv(const std::filesystem::path& path,
                                        std::span<const std::string> schema = {});

/// Reads an inflation CSV with columns `date,rate` (per-period fractions).
InflationSeries load_inflation_csv(const std::filesystem::path& path);

void write_price_csv(const std::filesystem::path& path, std::span<const PriceSeries> series);
void write_inflation_csv(const std::filesystem::path& path, const InflationSeries& inflation);

}  // namespace allockit::data
