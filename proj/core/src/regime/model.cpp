#include "allockit/regime/model.hpp"

#include <cmath>
#include <random>

#include "allockit/error.hpp"
#include "allockit/numerics/gaussian.hpp"
#include "allockit/weights.hpp"

namespace allockit::regime {

using numerics::Matrix;
using numerics::SymMatrix;
using numerics::Vector;

namespace {

void check_distribution(std::span<const double> p, const std::string& what) {
    double s = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(what + " has an entry outside [0, 1]");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw ConfigError(what + " does not sum to 1");
}

std::size_t draw_index(std::span<const double> p, double u) {
    double c = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        c += p[i];
        if (u < c) return i;
    }
    // Rounding left u above the total; take the last state with positive mass.
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] > 0.0) return i;
    return p.size() - 1;
}

}  // namespace

Vector MsModel::conditional_mean(std::size_t s, const Matrix& y, std::size_t t) const {
    const auto& st = states[s];
    Vector m = st.intercept;
    for (std::size_t j = 0; j < st.ar.size(); ++j) {
        if (t < j + 1) break;
        const auto lag = y.row(t - 1 - j);
        const Matrix& a = st.ar[j];
        for (std::size_t r = 0; r < m.size(); ++r)
            for (std::size_t c = 0; c < m.size(); ++c) m[r] += a(r, c) * lag[c];
    }
    return m;
}

void MsModel::validate() const {
    const std::size_t kk = k();
    if (kk == 0) throw ConfigError("regime model needs at least one state");
    const std::size_t d = dims();
    if (d == 0) throw ConfigError("regime model has no series");
    for (const auto& st : states) {
        if (st.intercept.size() != d || st.covariance.size() != d)
            throw ConfigError("state parameters have inconsistent dimensions");
        if (st.ar.size() != p) throw ConfigError("each state needs exactly p autoregressive matrices");
        for (const auto& a : st.ar)
            if (a.rows() != d || a.cols() != d) throw ConfigError("autoregressive matrix has wrong shape");
        numerics::Cholesky check(st.covariance);
    }
    if (transition.rows() != kk || transition.cols() != kk) throw ConfigError("transition matrix must be k × k");
    for (std::size_t i = 0; i < kk; ++i) check_distribution(transition.row(i), "transition row " + std::to_string(i));
    if (initial.size() != kk) throw ConfigError("initial distribution must have k entries");
    check_distribution(initial, "initial distribution");
}

MsModel MsModel::gaussian(std::vector<Vector> means, std::vector<SymMatrix> covariances, Matrix transition) {
    if (means.size() != covariances.size()) throw ConfigError("one covariance per state is required");
    MsModel m;
    for (std::size_t s = 0; s < means.size(); ++s) m.states.push_back({std::move(means[s]), {}, std::move(covariances[s])});
    m.transition = std::move(transition);
    m.initial = stationary_distribution(m.transition);
    m.validate();
    return m;
}

Vector stationary_distribution(const Matrix& transition) {
    const std::size_t k = transition.rows();
    if (k == 0 || transition.cols() != k) throw ConfigError("transition matrix must be square");
    // Replace the last balance equation by the normalization and solve by elimination.
    Matrix a(k, k);
    Vector b(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) a(i, j) = transition(j, i) - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < k; ++j) a(k - 1, j) = 1.0;
    b[k - 1] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (std::abs(a(piv, c)) < 1e-14) {
            // Reducible chain: no unique stationary law, fall back to uniform.
            return Vector(k, 1.0 / static_cast<double>(k));
        }
        if (piv != c) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a(piv, j), a(c, j));
            std::swap(b[piv], b[c]);
        }
        for (std::size_t r = c + 1; r < k; ++r) {
            const double f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < k; ++j) a(r, j) -= f * a(c, j);
            b[r] -= f * b[c];
        }
    }
    Vector pi(k);
    for (std::size_t r = k; r-- > 0;) {
        double s = b[r];
        for (std::size_t j = r + 1; j < k; ++j) s -= a(r, j) * pi[j];
        pi[r] = s / a(r, r);
    }
    double total = 0.0;
    for (auto& v : pi) total += (v = std::max(v, 0.0));
    for (auto& v : pi) v /= total;
    return pi;
}

Simulation simulate(const MsModel& model, std::size_t periods, std::uint64_t seed, std::vector<std::string> asset_ids) {
    model.validate();
    if (periods <= model.p) throw ConfigError("simulation length must exceed the autoregressive order");
    const std::size_t d = model.dims();
    if (asset_ids.empty()) asset_ids = default_asset_ids(d);
    if (asset_ids.size() != d) throw ConfigError("asset id count does not match the model dimension");

    std::vector<numerics::GaussianDensity> shocks;
    for (const auto& st : model.states) shocks.emplace_back(Vector(d, 0.0), st.covariance);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal;

    Simulation sim;
    sim.panel.asset_ids = std::move(asset_ids);
    sim.panel.values = Matrix(periods, d);
    data::YearMonth date{2000, 1};
    std::size_t state = draw_index(model.initial, uniform(rng));
    Vector z(d);
    for (std::size_t t = 0; t < periods; ++t) {
        if (t > 0) state = draw_index(model.transition.row(state), uniform(rng));
        sim.states.push_back(state);
        for (auto& v : z) v = normal(rng);
        const Vector eps = shocks[state].transform(z);
        const Vector mean = model.conditional_mean(state, sim.panel.values, t);
        for (std::size_t c = 0; c < d; ++c) sim.panel.values(t, c) = mean[c] + eps[c];
        sim.panel.dates.push_back(date);
        date = date.next();
    }
    return sim;
}

}  // namespace allockit::regime
