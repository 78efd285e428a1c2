#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "allockit/error.hpp"
#include "allockit/meanvar/frontier.hpp"
#include "oracles.hpp"

using namespace allockit::meanvar;
using allockit::NotPositiveDefinite;
using allockit::NumericError;
using allockit::numerics::dot;
using allockit::numerics::Matrix;
using allockit::numerics::quadratic_form;
using allockit::numerics::SymMatrix;
using allockit::numerics::Vector;

namespace {

const Vector kTwoMeans{0.1, 0.2};

struct Instance {
    Vector means;
    SymMatrix cov;
};

Instance random_instance(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Instance inst{Vector(n), oracle::random_spd(n, rng).scaled(0.01)};
    for (auto& m : inst.means) m = 0.05 * z(rng);
    return inst;
}

double sum(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Minimizes wᵀΣw on {wᵀE = μ, wᵀ1 = 1} by parametrizing the plane as w0 + Z t,
// with Z an orthonormal basis of the complement of span{E, 1}.
Vector null_space_minimizer(const Vector& e, const SymMatrix& cov, double mu) {
    const std::size_t n = e.size();
    std::vector<Vector> basis;
    auto orthogonalize = [&](Vector v) {
        for (const auto& b : basis) {
            const double p = dot(v, b);
            for (std::size_t i = 0; i < n; ++i) v[i] -= p * b[i];
        }
        return v;
    };
    auto normalize = [](Vector v) {
        const double len = std::sqrt(dot(v, v));
        for (auto& x : v) x /= len;
        return v;
    };
    basis.push_back(normalize(Vector(n, 1.0)));
    basis.push_back(normalize(orthogonalize(e)));
    const std::size_t constrained = basis.size();
    for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
        Vector unit(n, 0.0);
        unit[k] = 1.0;
        Vector v = orthogonalize(unit);
        if (std::sqrt(dot(v, v)) > 1e-8) basis.push_back(normalize(v));
    }
    // Particular solution in span{1, E}.
    Matrix a(2, 2);
    a(0, 0) = dot(Vector(n, 1.0), basis[0]);
    a(0, 1) = dot(Vector(n, 1.0), basis[1]);
    a(1, 0) = dot(e, basis[0]);
    a(1, 1) = dot(e, basis[1]);
    const Vector c = *oracle::gauss_solve(a, Vector{1.0, mu});
    Vector w0(n);
    for (std::size_t i = 0; i < n; ++i) w0[i] = c[0] * basis[0][i] + c[1] * basis[1][i];

    const std::size_t m = n - constrained;
    Matrix h(m, m);
    Vector g(m);
    const Vector sw0 = cov * w0;
    for (std::size_t p = 0; p < m; ++p) {
        const Vector sz = cov * basis[constrained + p];
        g[p] = -dot(basis[constrained + p], sw0);
        for (std::size_t q = 0; q < m; ++q) h(q, p) = dot(basis[constrained + q], sz);
    }
    const Vector t = *oracle::gauss_solve(h, g);
    Vector w = w0;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t i = 0; i < n; ++i) w[i] += t[p] * basis[constrained + p][i];
    return w;
}

}  // namespace

TEST(FrontierCoefficients, IdentityTwoAssets) {
    const auto c = frontier_coefficients(kTwoMeans, SymMatrix::identity(2));
    EXPECT_NEAR(c.a, 0.05, 1e-15);
    EXPECT_NEAR(c.b, 0.3, 1e-15);
    EXPECT_NEAR(c.c, 2.0, 1e-15);
    EXPECT_NEAR(c.d, 0.01, 1e-15);
}

TEST(FrontierCoefficients, ZeroMeans) {
    const auto c = frontier_coefficients(Vector(4, 0.0), SymMatrix::identity(4));
    EXPECT_EQ(c.a, 0.0);
    EXPECT_EQ(c.b, 0.0);
    EXPECT_EQ(c.c, 4.0);
    EXPECT_TRUE(c.degenerate());
}

TEST(FrontierCoefficients, ScalingCovarianceDividesCoefficients) {
    const auto base = frontier_coefficients(kTwoMeans, SymMatrix::identity(2));
    const auto scaled = frontier_coefficients(kTwoMeans, SymMatrix::identity(2).scaled(4.0));
    EXPECT_NEAR(scaled.a, base.a / 4.0, 1e-16);
    EXPECT_NEAR(scaled.b, base.b / 4.0, 1e-16);
    EXPECT_NEAR(scaled.c, base.c / 4.0, 1e-16);
}

TEST(FrontierCoefficients, RejectsSingleAssetAndSingularCovariance) {
    EXPECT_THROW(frontier_coefficients(Vector{0.1}, SymMatrix::identity(1)), allockit::ConfigError);
    SymMatrix singular(2, 1.0);
    EXPECT_THROW(frontier_coefficients(kTwoMeans, singular), NotPositiveDefinite);
}

TEST(FrontierVariance, Examples) {
    const auto c = frontier_coefficients(kTwoMeans, SymMatrix::identity(2));
    EXPECT_NEAR(frontier_variance(c, c.b / c.c), 1.0 / c.c, 1e-12);
    EXPECT_NEAR(frontier_variance(c, 0.15), 0.5, 1e-12);
    EXPECT_NEAR(frontier_variance(c, 0.2), 1.0, 1e-12);
}

TEST(FrontierVariance, DegenerateMeansRejected) {
    const auto c = frontier_coefficients(Vector{0.05, 0.05, 0.05}, SymMatrix::identity(3));
    EXPECT_THROW(frontier_variance(c, 0.05), NumericError);
    EXPECT_THROW(efficient_weights(Vector{0.05, 0.05, 0.05}, SymMatrix::identity(3), 0.05), NumericError);
}

TEST(EfficientWeights, Examples) {
    const auto mid = efficient_weights(kTwoMeans, SymMatrix::identity(2), 0.15);
    EXPECT_NEAR(mid.weights.weights[0], 0.5, 1e-12);
    EXPECT_NEAR(mid.weights.weights[1], 0.5, 1e-12);

    const auto corner = efficient_weights(kTwoMeans, SymMatrix::identity(2), 0.2, {"X", "Y"});
    EXPECT_NEAR(corner.weights.weights[0], 0.0, 1e-12);
    EXPECT_NEAR(corner.weights.weights[1], 1.0, 1e-12);
    EXPECT_NEAR(corner.variance, 1.0, 1e-12);
    EXPECT_EQ(corner.weights.asset_ids, (std::vector<std::string>{"X", "Y"}));
}

TEST(EfficientWeights, MatchesNullSpaceOracle) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> target(-0.1, 0.1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(5, rng);
        const double mu = target(rng);
        const auto p = efficient_weights(inst.means, inst.cov, mu);
        const Vector w = null_space_minimizer(inst.means, inst.cov, mu);
        EXPECT_NEAR(p.variance, quadratic_form(inst.cov, w), 1e-4) << "trial " << trial;
        EXPECT_NEAR(quadratic_form(inst.cov, p.weights.weights), quadratic_form(inst.cov, w),
                    1e-10 * quadratic_form(inst.cov, w));
    }
}

TEST(EfficientWeights, NoFeasiblePerturbationIsBetter) {
    // Random search over the two-constraint plane around the closed-form solution.
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z;
    const auto inst = random_instance(5, rng);
    const double mu = 0.03;
    const auto p = efficient_weights(inst.means, inst.cov, mu);
    Vector e = inst.means;
    const double e_mean = sum(e) / 5.0;
    for (auto& x : e) x -= e_mean;
    for (int k = 0; k < 5000; ++k) {
        Vector d(5);
        for (auto& x : d) x = 0.05 * z(rng);
        const double d_mean = sum(d) / 5.0;
        for (auto& x : d) x -= d_mean;
        const double proj = dot(d, e) / dot(e, e);
        Vector probe = p.weights.weights;
        for (std::size_t i = 0; i < 5; ++i) probe[i] += d[i] - proj * e[i];
        ASSERT_NEAR(dot(probe, inst.means), mu, 1e-12);
        ASSERT_NEAR(sum(probe), 1.0, 1e-12);
        EXPECT_GE(quadratic_form(inst.cov, probe), p.variance * (1.0 - 1e-12));
    }
}

TEST(EfficientWeights, VarianceMatchesFormulaAndConstraintsHold) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> target(-0.2, 0.2);
    std::uniform_int_distribution<std::size_t> size(2, 8);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(size(rng), rng);
        const double mu = target(rng);
        const auto c = frontier_coefficients(inst.means, inst.cov);
        const auto p = efficient_weights(inst.means, inst.cov, mu);
        const double formula = frontier_variance(c, mu);
        const double realized = quadratic_form(inst.cov, p.weights.weights);
        EXPECT_NEAR(realized, formula, 1e-8 * formula);
        EXPECT_NEAR(p.weights.sum(), 1.0, 1e-9);
        EXPECT_NEAR(dot(p.weights.weights, inst.means), mu, 1e-9);
        EXPECT_GE(p.variance, 1.0 / c.c - 1e-12);
        EXPECT_DOUBLE_EQ(p.std_dev, std::sqrt(p.variance));
    }
}

TEST(GmvWeights, Examples) {
    const auto eq = gmv_weights(SymMatrix::identity(3));
    for (double w : eq.weights) EXPECT_NEAR(w, 1.0 / 3.0, 1e-15);
    const auto d = gmv_weights(SymMatrix::diagonal(Vector{1.0, 4.0}));
    EXPECT_NEAR(d.weights[0], 0.8, 1e-15);
    EXPECT_NEAR(d.weights[1], 0.2, 1e-15);
}

TEST(GmvWeights, EqualsEfficientAtVertex) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(6, rng);
        const auto c = frontier_coefficients(inst.means, inst.cov);
        const auto g = gmv_weights(inst.cov);
        const auto e = efficient_weights(inst.means, inst.cov, c.b / c.c);
        for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(g.weights[i], e.weights.weights[i], 1e-10);
        EXPECT_NEAR(quadratic_form(inst.cov, g.weights), 1.0 / c.c, 1e-12);
    }
}

TEST(GmvWeights, DominatesRandomPortfolios) {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> z;
    const auto inst = random_instance(5, rng);
    const auto g = gmv_weights(inst.cov);
    const double best = quadratic_form(inst.cov, g.weights);
    for (int k = 0; k < 1000; ++k) {
        Vector w(5);
        for (auto& x : w) x = z(rng);
        const double s = sum(w);
        if (std::abs(s) < 1e-3) continue;
        for (auto& x : w) x /= s;
        EXPECT_LE(best, quadratic_form(inst.cov, w));
    }
}

TEST(GmvWeights, ZeroSumPerturbationIncreasesVariance) {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> z;
    const auto inst = random_instance(5, rng);
    const auto g = gmv_weights(inst.cov);
    const double best = quadratic_form(inst.cov, g.weights);
    for (int k = 0; k < 500; ++k) {
        Vector d(5);
        for (auto& x : d) x = z(rng);
        const double mean = sum(d) / 5.0;
        for (auto& x : d) x -= mean;
        const double len = std::sqrt(dot(d, d));
        Vector w = g.weights;
        for (std::size_t i = 0; i < 5; ++i) w[i] += 1e-3 * d[i] / len;
        EXPECT_GT(quadratic_form(inst.cov, w), best);
    }
}

TEST(Frontier, ScaleEquivariance) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(4, rng);
        const double s = std::ldexp(1.0, trial % 7 - 3) * 1.7;
        const auto a = efficient_weights(inst.means, inst.cov, 0.02);
        const auto b = efficient_weights(inst.means, inst.cov.scaled(s), 0.02);
        const auto ga = gmv_weights(inst.cov);
        const auto gb = gmv_weights(inst.cov.scaled(s));
        for (std::size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(a.weights.weights[i], b.weights.weights[i], 1e-10);
            EXPECT_NEAR(ga.weights[i], gb.weights[i], 1e-12);
        }
    }
}

TEST(Frontier, RedundantAssetKeepsCombinedWeight) {
    std::mt19937_64 rng(18);
    const auto inst = random_instance(3, rng);
    SymMatrix dup(4);
    const std::size_t src[4] = {0, 1, 2, 2};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j <= i; ++j) dup.set(i, j, inst.cov(src[i], src[j]));
    Vector means{inst.means[0], inst.means[1], inst.means[2], inst.means[2]};

    EXPECT_THROW(gmv_weights(dup), NotPositiveDefinite);

    const RidgeOptions ridge{.enabled = true};
    FrontierSolver solver(means, dup, {}, ridge);
    EXPECT_TRUE(solver.ridge_applied());
    const auto g0 = gmv_weights(inst.cov);
    const auto g1 = solver.gmv();
    EXPECT_NEAR(g1.weights[0], g0.weights[0], 1e-6);
    EXPECT_NEAR(g1.weights[1], g0.weights[1], 1e-6);
    EXPECT_NEAR(g1.weights[2] + g1.weights[3], g0.weights[2], 1e-6);

    const auto e0 = efficient_weights(inst.means, inst.cov, 0.01);
    const auto e1 = solver.efficient(0.01);
    EXPECT_NEAR(e1.weights.weights[2] + e1.weights.weights[3], e0.weights.weights[2], 1e-6);
}

TEST(Frontier, RidgeIsNotAppliedToHealthyCovariance) {
    FrontierSolver solver(kTwoMeans, SymMatrix::identity(2), {}, RidgeOptions{.enabled = true});
    EXPECT_FALSE(solver.ridge_applied());
    EXPECT_EQ(solver.covariance(), SymMatrix::identity(2));
}

TEST(TraceFrontier, SingleVertexPoint) {
    const auto c = frontier_coefficients(kTwoMeans, SymMatrix::identity(2));
    const Vector grid{c.b / c.c};
    const auto pts = trace_frontier(kTwoMeans, SymMatrix::identity(2), grid);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_NEAR(pts[0].variance, 1.0 / c.c, 1e-12);
}

TEST(TraceFrontier, SymmetricGridGivesSymmetricVariances) {
    std::mt19937_64 rng(19);
    const auto inst = random_instance(5, rng);
    const auto c = frontier_coefficients(inst.means, inst.cov);
    const double vertex = c.b / c.c;
    Vector grid;
    for (int k = -10; k <= 10; ++k) grid.push_back(vertex + 0.004 * k);
    const auto pts = trace_frontier(inst.means, inst.cov, grid);
    for (std::size_t k = 0; k < 10; ++k) {
        EXPECT_NEAR(pts[k].variance, pts[20 - k].variance, 1e-10 * pts[k].variance);
        EXPECT_GT(pts[k].variance, pts[k + 1].variance);
        EXPECT_LT(pts[20 - k - 1].variance, pts[20 - k].variance);
    }
}

TEST(TraceFrontier, CsvRoundTrip) {
    std::mt19937_64 rng(20);
    const auto inst = random_instance(4, rng);
    Vector grid;
    for (int k = 0; k < 50; ++k) grid.push_back(-0.05 + 0.002 * k);
    const auto pts = trace_frontier(inst.means, inst.cov, grid, {"A", "B", "C", "D"});
    const auto table = frontier_to_csv(pts);
    ASSERT_EQ(table.header.size(), 4u + 3u);
    const auto back = frontier_from_csv(allockit::io::parse_csv(allockit::io::to_csv_string(table)));
    ASSERT_EQ(back.size(), pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        EXPECT_EQ(back[k].target_mean, pts[k].target_mean);
        EXPECT_EQ(back[k].variance, pts[k].variance);
        EXPECT_EQ(back[k].std_dev, pts[k].std_dev);
        EXPECT_EQ(back[k].weights.weights, pts[k].weights.weights);
        EXPECT_EQ(back[k].weights.asset_ids, pts[k].weights.asset_ids);
    }
}

TEST(TraceFrontier, EmptyGridRejected) {
    EXPECT_THROW(trace_frontier(kTwoMeans, SymMatrix::identity(2), Vector{}), allockit::ConfigError);
}
