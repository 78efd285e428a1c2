#pragma once

#include <span>
#include <string>
#include <vector>

#include "allockit/io/csv.hpp"
#include "allockit/numerics/linalg.hpp"
#include "allockit/weights.hpp"

namespace allockit::meanvar {

/// Opt-in ridge for near-singular covariance: Σ + ε·trace(Σ)/N·I, applied once and only
/// after the plain factorization has failed. Off by default, so singular Σ is an error.
struct RidgeOptions {
    bool enabled = false;
    double epsilon = 1e-8;
};

/// A = EᵀΣ⁻¹E, B = EᵀΣ⁻¹1, C = 1ᵀΣ⁻¹1 and D = AC − B².
struct FrontierCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    /// True when E is (numerically) proportional to 1: D ≤ 1e-12·A·C.
    bool degenerate() const noexcept { return !(d > 1e-12 * a * c); }
    double gmv_mean() const noexcept { return b / c; }
    double gmv_variance() const noexcept { return 1.0 / c; }
};

struct FrontierPoint {
    double target_mean = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
    WeightVector weights;
};

/// Factors Σ once and answers every frontier query from the two solves Σ⁻¹E and Σ⁻¹1.
class FrontierSolver {
public:
    /// Throws NotPositiveDefinite when Σ cannot be factored (after the ridge, if enabled).
    FrontierSolver(numerics::Vector means, const numerics::SymMatrix& cov,
                   std::vector<std::string> asset_ids = {}, RidgeOptions ridge = {});

    const FrontierCoefficients& coefficients() const noexcept { return coef_; }
    bool ridge_applied() const noexcept { return ridge_applied_; }
    const numerics::SymMatrix& covariance() const noexcept { return cov_; }
    const numerics::Vector& means() const noexcept { return means_; }

    /// w = Σ⁻¹1 / 1ᵀΣ⁻¹1.
    WeightVector gmv() const;

    /// Minimum-variance weights for target mean μ: w = Σ⁻¹(λE + γ1) with
    /// λ = (Cμ − B)/D and γ = (A − Bμ)/D. Throws NumericError when the frontier is degenerate.
    FrontierPoint efficient(double target_mean) const;

    /// The frontier point whose multiplier λ equals `slope`, i.e. μ = B/C + slope·D/C.
    FrontierPoint efficient_at_slope(double slope) const;

    std::vector<FrontierPoint> trace(std::span<const double> mean_grid) const;

private:
    numerics::Vector means_;
    numerics::SymMatrix cov_;
    std::vector<std::string> ids_;
    numerics::Vector inv_means_;
    numerics::Vector inv_ones_;
    FrontierCoefficients coef_;
    bool ridge_applied_ = false;
};

FrontierCoefficients frontier_coefficients(std::span<const double> means, const numerics::SymMatrix& cov,
                                           RidgeOptions ridge = {});

/// (Cμ² − 2Bμ + A) / (AC − B²). Throws NumericError on a degenerate frontier.
double frontier_variance(const FrontierCoefficients& coef, double target_mean);

FrontierPoint efficient_weights(std::span<const double> means, const numerics::SymMatrix& cov, double target_mean,
                                std::vector<std::string> asset_ids = {}, RidgeOptions ridge = {});

WeightVector gmv_weights(const numerics::SymMatrix& cov, std::vector<std::string> asset_ids = {},
                         RidgeOptions ridge = {});

std::vector<FrontierPoint> trace_frontier(std::span<const double> means, const numerics::SymMatrix& cov,
                                          std::span<const double> mean_grid, std::vector<std::string> asset_ids = {},
                                          RidgeOptions ridge = {});

/// Columns: mu, variance, std_dev, then one weight column per asset.
io::CsvTable frontier_to_csv(std::span<const FrontierPoint> points);
std::vector<FrontierPoint> frontier_from_csv(const io::CsvTable& table);

}  // namespace allockit::meanvar
