#include "allockit/cli/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "allockit/data/loader.hpp"
#include "allockit/error.hpp"
#include "allockit/numerics/linalg.hpp"

namespace allockit::cli {

namespace {

using numerics::Matrix;
using numerics::SymMatrix;
using numerics::Vector;

// Monthly real returns. The Bitcoin row is a gross return (1 + r); the index and T-bill rows
// are in percent, read consistently across mean, deviation, range and extremes.
const std::vector<AssetCalibration> kAssets{
    {"BTC", "Bitcoin", 0.172038733, 0.560214599},
    {"WORLD", "MSCI World", 0.00482111888, 0.00079260998},
    {"USA", "MSCI USA", 0.00683637294, 0.00044266323},
    {"UK", "MSCI UK", 0.00595941886, 0.00022178124},
    {"EUROPE_EX_UK", "MSCI Europe ex UK", 0.00629781454, 0.00021626692},
    {"JAPAN", "MSCI Japan", 0.00617580191, 0.00023967518},
    {"PACIFIC_EX_JAPAN", "MSCI Pacific ex Japan", 0.00622059806, 0.00029836927},
    {"TBILL", "US 1-month T-bills", 0.00795015193, 0.01657353951},
};

// Lower triangle, row by row.
const double kCorrelation[8][8] = {
    {1},
    {-0.899410844, 1},
    {0.862045754, -0.787293815, 1},
    {-0.585385261, 0.716525815, -0.422379548, 1},
    {0.215228646, -0.049546817, 0.540784214, 0.219775739, 1},
    {0.183992924, -0.083852555, 0.38217477, 0.147872605, 0.527447299, 1},
    {-0.051965578, 0.203249143, 0.253690658, 0.424709816, 0.524463447, 0.124163037, 1},
    {0.04138583, -0.055290322, 0.05110286, -0.037710118, 0.022530494, 0.040380562, 0.016517151, 1},
};

SymMatrix clip_eigenvalues(const SymMatrix& a, double floor) {
    const auto eig = numerics::symmetric_eigen(a);
    const std::size_t n = a.size();
    SymMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += eig.vectors(r, k) * std::max(eig.values[k], floor) * eig.vectors(c, k);
            out.set(r, c, s);
        }
    return out;
}

SymMatrix unit_diagonal(const SymMatrix& a) {
    const std::size_t n = a.size();
    SymMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c)
            out.set(r, c, r == c ? 1.0 : a(r, c) / std::sqrt(a(r, r) * a(c, c)));
    return out;
}

double max_abs_difference(const SymMatrix& a, const SymMatrix& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < a.size(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

void standardize_column(Matrix& x, std::size_t c) {
    const std::size_t t = x.rows();
    double mean = 0.0;
    for (std::size_t r = 0; r < t; ++r) mean += x(r, c);
    mean /= static_cast<double>(t);
    double ss = 0.0;
    for (std::size_t r = 0; r < t; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(t - 1));
    if (!(sd > 0.0)) throw NumericError("degenerate fixture draw");
    for (std::size_t r = 0; r < t; ++r) x(r, c) = (x(r, c) - mean) / sd;
}

// Rows of z recoloured so that their sample correlation is exactly `target`.
Matrix recolour(Matrix z, const SymMatrix& target) {
    const std::size_t t = z.rows(), n = z.cols();
    for (std::size_t c = 0; c < n; ++c) standardize_column(z, c);
    SymMatrix sample(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < t; ++r) s += z(r, a) * z(r, b);
            sample.set(a, b, s / static_cast<double>(t - 1));
        }
    const numerics::Cholesky ls(sample);
    const numerics::Cholesky lt(target);
    Matrix out(t, n);
    for (std::size_t r = 0; r < t; ++r) {
        const Vector white = ls.solve_lower(z.row(r));
        for (std::size_t a = 0; a < n; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b <= a; ++b) s += lt.lower()(a, b) * white[b];
            out(r, a) = s;
        }
    }
    return out;
}

}  // namespace

const std::vector<AssetCalibration>& fixture_assets() { return kAssets; }

SymMatrix fixture_target_correlation() {
    SymMatrix m(kAssets.size());
    for (std::size_t r = 0; r < kAssets.size(); ++r)
        for (std::size_t c = 0; c <= r; ++c) m.set(r, c, kCorrelation[r][c]);
    return m;
}

SymMatrix nearest_correlation(const SymMatrix& target, double min_eigenvalue, int max_iterations, double tolerance) {
    const std::size_t n = target.size();
    SymMatrix y = target;
    SymMatrix correction(n);
    for (int it = 0; it < max_iterations; ++it) {
        SymMatrix r(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b) r.set(a, b, y(a, b) - correction(a, b));
        const SymMatrix x = clip_eigenvalues(r, min_eigenvalue);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b) correction.set(a, b, x(a, b) - r(a, b));
        SymMatrix next = x;
        for (std::size_t a = 0; a < n; ++a) next.set(a, a, 1.0);
        const double change = max_abs_difference(next, y);
        y = std::move(next);
        if (change < tolerance) break;
    }
    return unit_diagonal(clip_eigenvalues(y, min_eigenvalue));
}

Fixture generate_fixture(const FixtureOptions& options) {
    if (options.returns < 3) throw ConfigError("fixture needs at least 3 return periods");
    const std::size_t t = options.returns, n = kAssets.size();
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;

    Fixture fx;
    fx.correlation = nearest_correlation(fixture_target_correlation());

    Matrix z(t, n);
    for (std::size_t r = 0; r < t; ++r)
        for (std::size_t c = 0; c < n; ++c) z(r, c) = normal(rng);
    Matrix x = recolour(std::move(z), fx.correlation);

    fx.real_returns.convention = data::ReturnConvention::real;
    fx.real_returns.values = Matrix(t, n);
    for (const auto& a : kAssets) fx.real_returns.asset_ids.push_back(a.id);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& a = kAssets[c];
        const double gross = 1.0 + a.mean;
        const double s2 = std::log1p(a.std_dev * a.std_dev / (gross * gross));
        const double m = std::log(gross) - 0.5 * s2;
        for (std::size_t r = 0; r < t; ++r) x(r, c) = std::exp(m + std::sqrt(s2) * x(r, c));
        standardize_column(x, c);
        for (std::size_t r = 0; r < t; ++r) {
            const double v = a.mean + a.std_dev * x(r, c);
            if (!(v > -1.0)) throw NumericError("fixture draw produced a return <= -1 for " + a.id);
            fx.real_returns.values(r, c) = v;
        }
    }

    data::YearMonth month = options.first_price;
    std::vector<data::YearMonth> price_dates{month};
    for (std::size_t r = 0; r < t; ++r) {
        month = month.next();
        price_dates.push_back(month);
        fx.real_returns.dates.push_back(month);
        fx.inflation.dates.push_back(month);
        fx.inflation.rates.push_back(options.inflation_mean + options.inflation_sd * normal(rng));
    }

    for (std::size_t c = 0; c < n; ++c) {
        data::PriceSeries s;
        s.asset_id = kAssets[c].id;
        s.dates = price_dates;
        s.prices.push_back(100.0);
        for (std::size_t r = 0; r < t; ++r) {
            const double nominal = (1.0 + fx.real_returns.values(r, c)) * (1.0 + fx.inflation.rates[r]) - 1.0;
            s.prices.push_back(s.prices.back() * (1.0 + nominal));
        }
        fx.prices.push_back(std::move(s));
    }
    return fx;
}

void write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    data::write_price_csv(dir / "prices.csv", fixture.prices);
    data::write_inflation_csv(dir / "cpi.csv", fixture.inflation);
}

}  // namespace allockit::cli
