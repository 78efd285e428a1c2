#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "allockit/data/series.hpp"
#include "allockit/numerics/matrix.hpp"

namespace allockit::cli {

/// Target monthly real-return moments for one fixture asset (net returns, fractions).
struct AssetCalibration {
    std::string id;
    std::string label;
    double mean = 0.0;
    double std_dev = 0.0;
};

const std::vector<AssetCalibration>& fixture_assets();

/// Correlation table of the calibration source, in `fixture_assets()` order.
numerics::SymMatrix fixture_target_correlation();

/// Nearest correlation matrix by alternating projections with a Dykstra correction;
/// the PSD step clips eigenvalues at `min_eigenvalue` so the result factors.
numerics::SymMatrix nearest_correlation(const numerics::SymMatrix& target, double min_eigenvalue = 1e-4,
                                        int max_iterations = 500, double tolerance = 1e-12);

struct FixtureOptions {
    std::uint64_t seed = 7;
    data::YearMonth first_price{2010, 7};
    std::size_t returns = 141;
    double inflation_mean = 0.002;
    double inflation_sd = 0.003;
};

struct Fixture {
    std::vector<data::PriceSeries> prices;
    data::InflationSeries inflation;
    data::ReturnPanel real_returns;   ///< the generated panel the prices encode
    numerics::SymMatrix correlation;  ///< copula correlation actually used
};

/// Gaussian copula with lognormal gross-return marginals. The normal draws are whitened
/// and recoloured so their sample correlation equals the copula target, and every column
/// is then shifted and scaled to hit the target mean and standard deviation exactly.
Fixture generate_fixture(const FixtureOptions& options = {});

/// Writes `prices.csv` and `cpi.csv` into `dir`.
void write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace allockit::cli
