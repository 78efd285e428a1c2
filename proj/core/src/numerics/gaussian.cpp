#include "allockit/numerics/gaussian.hpp"

#include <cmath>

#include "allockit/error.hpp"

namespace allockit::numerics {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}

GaussianDensity::GaussianDensity(Vector mean, const SymMatrix& cov)
    : mean_(std::move(mean)), chol_(cov) {
    if (cov.size() != mean_.size()) throw NumericError("mean and covariance dimensions differ");
    log_norm_ = -0.5 * (static_cast<double>(mean_.size()) * kLogTwoPi + chol_.log_determinant());
}

double GaussianDensity::log_pdf(std::span<const double> x) const { return log_pdf(x, mean_); }

double GaussianDensity::log_pdf(std::span<const double> x, std::span<const double> mean) const {
    if (x.size() != dim() || mean.size() != dim())
        throw NumericError("observation dimension does not match density");
    Vector centered(dim());
    for (std::size_t i = 0; i < dim(); ++i) centered[i] = x[i] - mean[i];
    const Vector z = chol_.solve_lower(centered);
    return log_norm_ - 0.5 * dot(z, z);
}

Vector GaussianDensity::transform(std::span<const double> standard_normal) const {
    if (standard_normal.size() != dim()) throw NumericError("draw dimension does not match density");
    const Matrix& l = chol_.lower();
    Vector out = mean_;
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t k = 0; k <= i; ++k) out[i] += l(i, k) * standard_normal[k];
    return out;
}

double mvn_logpdf(std::span<const double> x, std::span<const double> mean, const SymMatrix& cov) {
    return GaussianDensity(Vector(mean.begin(), mean.end()), cov).log_pdf(x);
}

}  // namespace allockit::numerics
