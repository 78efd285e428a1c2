#pragma once

#include <span>

#include "allockit/numerics/linalg.hpp"

namespace allockit::numerics {

/// Multivariate normal with a pre-factored covariance, for repeated density evaluation.
class GaussianDensity {
public:
    /// Throws NotPositiveDefinite for singular covariance.
    GaussianDensity(Vector mean, const SymMatrix& cov);

    std::size_t dim() const noexcept { return mean_.size(); }
    const Vector& mean() const noexcept { return mean_; }

    double log_pdf(std::span<const double> x) const;

    /// Log density of `x` with an externally supplied mean (conditional means in VAR models).
    double log_pdf(std::span<const double> x, std::span<const double> mean) const;

    /// Maps a standard-normal vector to a draw from this distribution.
    Vector transform(std::span<const double> standard_normal) const;

private:
    Vector mean_;
    Cholesky chol_;
    double log_norm_;
};

double mvn_logpdf(std::span<const double> x, std::span<const double> mean, const SymMatrix& cov);

}  // namespace allockit::numerics
