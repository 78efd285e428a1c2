#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "allockit/data/series.hpp"
#include "allockit/numerics/matrix.hpp"

namespace allockit::data {

/// Per-asset summary in the layout of a descriptive-statistics table.
///
/// `std_dev` uses the n − 1 denominator. `skewness` and `kurtosis` follow the
/// bias-corrected spreadsheet conventions (SKEW, and KURT as excess kurtosis); they are
/// empty when undefined: zero variance, fewer than 3 observations for skewness, fewer
/// than 4 for kurtosis.
struct StatsRecord {
    std::string asset_id;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;
    std::optional<double> kurtosis;
    std::optional<double> skewness;
    double range = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Statistics for one series. Throws DataError for fewer than 3 observations.
StatsRecord describe(std::span<const double> values, std::string asset_id = {});

std::vector<StatsRecord> descriptive_stats(const ReturnPanel& panel);

/// Pearson correlations. Throws DataError naming the first zero-variance asset.
numerics::SymMatrix correlation_matrix(const ReturnPanel& panel);

numerics::Vector sample_mean(const ReturnPanel& panel);

/// Unbiased (n − 1) sample covariance.
numerics::SymMatrix sample_covariance(const ReturnPanel& panel);

}  // namespace allockit::data
