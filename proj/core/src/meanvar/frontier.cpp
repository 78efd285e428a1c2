#include "allockit/meanvar/frontier.hpp"

#include <algorithm>
#include <cmath>

#include "allockit/error.hpp"

namespace allockit::meanvar {

namespace {

using numerics::Cholesky;
using numerics::SymMatrix;
using numerics::Vector;

struct Factored {
    SymMatrix cov;
    Cholesky chol;
    bool ridged;
};

Factored factor(const SymMatrix& cov, const RidgeOptions& ridge) {
    try {
        return {cov, Cholesky(cov), false};
    } catch (const NotPositiveDefinite&) {
        if (!ridge.enabled) throw;
    }
    SymMatrix ridged = cov;
    const auto n = static_cast<double>(cov.size());
    ridged.add_to_diagonal(ridge.epsilon * cov.trace() / n);
    Cholesky chol(ridged);
    return {std::move(ridged), std::move(chol), true};
}

std::vector<std::string> resolve_ids(std::vector<std::string> ids, std::size_t n) {
    if (ids.empty()) return default_asset_ids(n);
    if (ids.size() != n) throw ConfigError("asset id count does not match the number of assets");
    return ids;
}

double parse_field(const std::string& text) {
    const auto v = io::parse_double(text);
    if (!v) throw DataError("unparseable number '" + text + "' in frontier table");
    return *v;
}

void require_degenerate_free(const FrontierCoefficients& coef) {
    if (coef.degenerate()) throw NumericError("degenerate frontier: mean vector is proportional to 1");
}

}  // namespace

FrontierSolver::FrontierSolver(Vector means, const SymMatrix& cov, std::vector<std::string> asset_ids,
                               RidgeOptions ridge)
    : means_(std::move(means)) {
    const std::size_t n = cov.size();
    if (n == 0) throw ConfigError("empty covariance matrix");
    if (means_.size() != n) throw ConfigError("mean vector and covariance dimensions differ");
    ids_ = resolve_ids(std::move(asset_ids), n);

    Factored f = factor(cov, ridge);
    cov_ = std::move(f.cov);
    ridge_applied_ = f.ridged;
    inv_means_ = f.chol.solve(means_);
    inv_ones_ = f.chol.solve(Vector(n, 1.0));

    coef_.a = numerics::dot(means_, inv_means_);
    coef_.b = numerics::dot(means_, inv_ones_);
    double c = 0.0;
    for (double v : inv_ones_) c += v;
    coef_.c = c;
    coef_.d = coef_.a * coef_.c - coef_.b * coef_.b;
}

WeightVector FrontierSolver::gmv() const {
    WeightVector w{ids_, inv_ones_};
    for (double& x : w.weights) x /= coef_.c;
    return w;
}

FrontierPoint FrontierSolver::efficient(double target_mean) const {
    require_degenerate_free(coef_);
    const double lambda = (coef_.c * target_mean - coef_.b) / coef_.d;
    const double gamma = (coef_.a - coef_.b * target_mean) / coef_.d;

    FrontierPoint p;
    p.target_mean = target_mean;
    p.weights.asset_ids = ids_;
    p.weights.weights.resize(means_.size());
    for (std::size_t i = 0; i < means_.size(); ++i)
        p.weights.weights[i] = lambda * inv_means_[i] + gamma * inv_ones_[i];
    p.variance = frontier_variance(coef_, target_mean);
    p.std_dev = std::sqrt(p.variance);
    return p;
}

FrontierPoint FrontierSolver::efficient_at_slope(double slope) const {
    require_degenerate_free(coef_);
    return efficient(coef_.b / coef_.c + slope * coef_.d / coef_.c);
}

std::vector<FrontierPoint> FrontierSolver::trace(std::span<const double> mean_grid) const {
    if (mean_grid.empty()) throw ConfigError("frontier grid is empty");
    std::vector<FrontierPoint> out;
    out.reserve(mean_grid.size());
    for (double mu : mean_grid) out.push_back(efficient(mu));
    return out;
}

FrontierCoefficients frontier_coefficients(std::span<const double> means, const SymMatrix& cov, RidgeOptions ridge) {
    if (cov.size() < 2) throw ConfigError("frontier needs at least two assets");
    return FrontierSolver(Vector(means.begin(), means.end()), cov, {}, ridge).coefficients();
}

double frontier_variance(const FrontierCoefficients& coef, double target_mean) {
    require_degenerate_free(coef);
    const double v = (coef.c * target_mean * target_mean - 2.0 * coef.b * target_mean + coef.a) / coef.d;
    // Rounding can push the vertex a hair below 1/C.
    return std::max(v, coef.gmv_variance());
}

FrontierPoint efficient_weights(std::span<const double> means, const SymMatrix& cov, double target_mean,
                                std::vector<std::string> asset_ids, RidgeOptions ridge) {
    return FrontierSolver(Vector(means.begin(), means.end()), cov, std::move(asset_ids), ridge)
        .efficient(target_mean);
}

WeightVector gmv_weights(const SymMatrix& cov, std::vector<std::string> asset_ids, RidgeOptions ridge) {
    return FrontierSolver(Vector(cov.size(), 0.0), cov, std::move(asset_ids), ridge).gmv();
}

std::vector<FrontierPoint> trace_frontier(std::span<const double> means, const SymMatrix& cov,
                                          std::span<const double> mean_grid, std::vector<std::string> asset_ids,
                                          RidgeOptions ridge) {
    return FrontierSolver(Vector(means.begin(), means.end()), cov, std::move(asset_ids), ridge).trace(mean_grid);
}

io::CsvTable frontier_to_csv(std::span<const FrontierPoint> points) {
    io::CsvTable t;
    t.header = {"mu", "variance", "std_dev"};
    if (!points.empty())
        for (const auto& id : points.front().weights.asset_ids) t.header.push_back(id);
    for (const auto& p : points) {
        std::vector<std::string> row{io::format_double(p.target_mean), io::format_double(p.variance),
                                     io::format_double(p.std_dev)};
        for (double w : p.weights.weights) row.push_back(io::format_double(w));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<FrontierPoint> frontier_from_csv(const io::CsvTable& table) {
    if (table.header.size() < 4 || table.header[0] != "mu" || table.header[1] != "variance" ||
        table.header[2] != "std_dev")
        throw DataError("frontier table must start with columns mu,variance,std_dev and list at least one asset");
    std::vector<std::string> ids(table.header.begin() + 3, table.header.end());
    std::vector<FrontierPoint> out;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw DataError("ragged frontier row");
        FrontierPoint p;
        p.target_mean = parse_field(row[0]);
        p.variance = parse_field(row[1]);
        p.std_dev = parse_field(row[2]);
        p.weights.asset_ids = ids;
        for (std::size_t i = 3; i < row.size(); ++i) p.weights.weights.push_back(parse_field(row[i]));
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace allockit::meanvar
