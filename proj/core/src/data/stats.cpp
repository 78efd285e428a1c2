#include "allockit/data/stats.hpp"

#include <algorithm>
#include <cmath>

#include "allockit/error.hpp"

namespace allockit::data {

StatsRecord describe(std::span<const double> values, std::string asset_id) {
    const std::size_t count = values.size();
    if (count < 3) throw DataError("descriptive statistics need at least 3 observations");

    StatsRecord rec;
    rec.asset_id = std::move(asset_id);
    rec.count = count;
    const double n = static_cast<double>(count);

    double sum = 0.0;
    for (double v : values) sum += v;
    rec.mean = sum / n;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    rec.min = sorted.front();
    rec.max = sorted.back();
    rec.range = rec.max - rec.min;
    rec.median = count % 2 == 1 ? sorted[count / 2] : 0.5 * (sorted[count / 2 - 1] + sorted[count / 2]);

    double m2 = 0.0;
    for (double v : values) m2 += (v - rec.mean) * (v - rec.mean);
    rec.std_dev = std::sqrt(m2 / (n - 1.0));
    if (rec.std_dev == 0.0) return rec;

    double s3 = 0.0;
    double s4 = 0.0;
    for (double v : values) {
        const double z = (v - rec.mean) / rec.std_dev;
        const double z2 = z * z;
        s3 += z2 * z;
        s4 += z2 * z2;
    }
    rec.skewness = n / ((n - 1.0) * (n - 2.0)) * s3;
    if (count >= 4) {
        rec.kurtosis = n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * s4 -
                       3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }
    return rec;
}

std::vector<StatsRecord> descriptive_stats(const ReturnPanel& panel) {
    std::vector<StatsRecord> out;
    out.reserve(panel.num_assets());
    for (std::size_t j = 0; j < panel.num_assets(); ++j) {
        const auto col = panel.column(j);
        out.push_back(describe(col, panel.asset_ids[j]));
    }
    return out;
}

numerics::Vector sample_mean(const ReturnPanel& panel) {
    const std::size_t t_count = panel.num_periods();
    numerics::Vector mean(panel.num_assets(), 0.0);
    for (std::size_t t = 0; t < t_count; ++t)
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += panel.values(t, j);
    for (double& m : mean) m /= static_cast<double>(t_count);
    return mean;
}

numerics::SymMatrix sample_covariance(const ReturnPanel& panel) {
    const std::size_t t_count = panel.num_periods();
    if (t_count < 2) throw DataError("covariance needs at least 2 periods");
    const auto mean = sample_mean(panel);
    const std::size_t n = panel.num_assets();
    numerics::SymMatrix cov(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < t_count; ++t)
                s += (panel.values(t, i) - mean[i]) * (panel.values(t, j) - mean[j]);
            cov.set(i, j, s / static_cast<double>(t_count - 1));
        }
    return cov;
}

numerics::SymMatrix correlation_matrix(const ReturnPanel& panel) {
    if (panel.num_periods() < 3) throw DataError("correlation needs at least 3 periods");
    const auto cov = sample_covariance(panel);
    const std::size_t n = cov.size();
    for (std::size_t j = 0; j < n; ++j)
        if (!(cov(j, j) > 0.0)) throw DataError("zero-variance column: " + panel.asset_ids[j]);
    numerics::SymMatrix corr(n);
    for (std::size_t i = 0; i < n; ++i) {
        corr.set(i, i, 1.0);
        for (std::size_t j = 0; j < i; ++j) {
            const double r = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
            corr.set(i, j, std::clamp(r, -1.0, 1.0));
        }
    }
    return corr;
}

}  // namespace allockit::data
