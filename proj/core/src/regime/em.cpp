#include "allockit/regime/em.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "allockit/error.hpp"
#include "allockit/numerics/linalg.hpp"

namespace allockit::regime {

using numerics::Matrix;
using numerics::SymMatrix;
using numerics::Vector;

std::size_t count_parameters(std::size_t k, std::size_t p, std::size_t d) {
    const std::size_t per_state = d + p * d * d + d * (d + 1) / 2;
    return k * per_state + k * (k - 1) + (k - 1);
}

MsModel relabel_bear_first(const MsModel& model) {
    const std::size_t k = model.k();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model.states[a].intercept[0] < model.states[b].intercept[0];
    });
    MsModel out;
    out.p = model.p;
    out.transition = Matrix(k, k);
    out.initial = Vector(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.states.push_back(model.states[order[i]]);
        out.initial[i] = model.initial[order[i]];
        for (std::size_t j = 0; j < k; ++j) out.transition(i, j) = model.transition(order[i], order[j]);
    }
    return out;
}

namespace {

struct Data {
    const data::ReturnPanel& panel;
    std::size_t p;
    std::size_t d;
    std::size_t rows;         // likelihood rows (T − p)
    std::size_t regressors;   // 1 + p·d
    Matrix x;                 // rows × regressors
    Vector variance_floor;    // per series
};

Data prepare(const data::ReturnPanel& panel, std::size_t p) {
    const std::size_t d = panel.num_assets();
    const std::size_t T = panel.num_periods();
    Data data{panel, p, d, T - p, 1 + p * d, Matrix(T - p, 1 + p * d), Vector(d)};
    for (std::size_t r = 0; r < data.rows; ++r) {
        const std::size_t t = r + p;
        data.x(r, 0) = 1.0;
        for (std::size_t j = 0; j < p; ++j) {
            const auto lag = panel.row(t - 1 - j);
            for (std::size_t c = 0; c < d; ++c) data.x(r, 1 + j * d + c) = lag[c];
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        double mean = 0.0;
        for (std::size_t t = 0; t < T; ++t) mean += panel.values(t, c);
        mean /= static_cast<double>(T);
        double ss = 0.0;
        for (std::size_t t = 0; t < T; ++t) ss += (panel.values(t, c) - mean) * (panel.values(t, c) - mean);
        data.variance_floor[c] = 1e-8 * std::max(ss / static_cast<double>(T), 1e-300);
    }
    return data;
}

// Weighted least squares and weighted residual covariance for one state. Returns false
// (leaving `st` untouched) when the state carries too little weight to be re-estimated.
bool m_step_state(const Data& data, std::span<const double> weight, StateParams& st, bool& floored) {
    const std::size_t q = data.regressors;
    const std::size_t d = data.d;
    double total = 0.0;
    for (double w : weight) total += w;
    if (!(total > 1e-10)) return false;

    SymMatrix xtx(q);
    Matrix xty(q, d);
    for (std::size_t r = 0; r < data.rows; ++r) {
        const double w = weight[r];
        if (w == 0.0) continue;
        const auto x = data.x.row(r);
        const auto y = data.panel.row(r + data.p);
        for (std::size_t a = 0; a < q; ++a) {
            for (std::size_t b = 0; b <= a; ++b) xtx.set(a, b, xtx(a, b) + w * x[a] * x[b]);
            for (std::size_t c = 0; c < d; ++c) xty(a, c) += w * x[a] * y[c];
        }
    }
    Matrix coef;
    try {
        coef = numerics::spd_solve(xtx, xty);  // q × d
    } catch (const NumericError&) {
        return false;
    }

    SymMatrix cov(d);
    Vector resid(d);
    for (std::size_t r = 0; r < data.rows; ++r) {
        const double w = weight[r];
        if (w == 0.0) continue;
        const auto x = data.x.row(r);
        const auto y = data.panel.row(r + data.p);
        for (std::size_t c = 0; c < d; ++c) {
            double fit = 0.0;
            for (std::size_t a = 0; a < q; ++a) fit += x[a] * coef(a, c);
            resid[c] = y[c] - fit;
        }
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b <= a; ++b) cov.set(a, b, cov(a, b) + w * resid[a] * resid[b]);
    }
    cov = cov.scaled(1.0 / total);
    for (std::size_t c = 0; c < d; ++c)
        if (cov(c, c) < data.variance_floor[c]) {
            cov.set(c, c, data.variance_floor[c]);
            floored = true;
        }
    try {
        numerics::Cholesky check(cov);
    } catch (const NotPositiveDefinite&) {
        cov.add_to_diagonal(*std::max_element(data.variance_floor.begin(), data.variance_floor.end()));
        floored = true;
    }

    st.intercept.assign(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) st.intercept[c] = coef(0, c);
    st.ar.assign(data.p, Matrix(d, d));
    for (std::size_t j = 0; j < data.p; ++j)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) st.ar[j](r, c) = coef(1 + j * d + c, r);
    st.covariance = std::move(cov);
    return true;
}

void m_step(const Data& data, const SmootherResult& e, MsModel& model, bool& floored) {
    const std::size_t k = model.k();
    const Matrix& g = e.output.smoothed;
    Vector weight(data.rows);
    for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t r = 0; r < data.rows; ++r) weight[r] = g(r, s);
        m_step_state(data, weight, model.states[s], floored);
    }
    for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j) row += e.transition_counts(i, j);
        if (!(row > 0.0)) continue;
        for (std::size_t j = 0; j < k; ++j) model.transition(i, j) = e.transition_counts(i, j) / row;
    }
    for (std::size_t s = 0; s < k; ++s) model.initial[s] = g(0, s);
}

MsModel initial_model(const Data& data, std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t d = data.d;
    SymMatrix cov(d);
    {
        Vector mean(d, 0.0);
        for (std::size_t r = 0; r < data.rows; ++r)
            for (std::size_t c = 0; c < d; ++c) mean[c] += data.panel.values(r + data.p, c);
        for (auto& m : mean) m /= static_cast<double>(data.rows);
        for (std::size_t r = 0; r < data.rows; ++r) {
            const auto y = data.panel.row(r + data.p);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b <= a; ++b) cov.set(a, b, cov(a, b) + (y[a] - mean[a]) * (y[b] - mean[b]));
        }
        cov = cov.scaled(1.0 / static_cast<double>(data.rows));
        for (std::size_t c = 0; c < d; ++c) cov.set(c, c, std::max(cov(c, c), data.variance_floor[c]));
    }
    // Distinct random observations serve as starting intercepts.
    std::vector<std::size_t> picks(data.rows);
    std::iota(picks.begin(), picks.end(), 0);
    for (std::size_t s = 0; s < k && s < picks.size(); ++s) {
        std::uniform_int_distribution<std::size_t> u(s, picks.size() - 1);
        std::swap(picks[s], picks[u(rng)]);
    }
    MsModel m;
    m.p = data.p;
    for (std::size_t s = 0; s < k; ++s) {
        const auto y = data.panel.row(picks[s % picks.size()] + data.p);
        m.states.push_back({Vector(y.begin(), y.end()), std::vector<Matrix>(data.p, Matrix(d, d)), cov});
    }
    std::uniform_real_distribution<double> stay(0.6, 0.95);
    m.transition = Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        const double diag = k == 1 ? 1.0 : stay(rng);
        for (std::size_t j = 0; j < k; ++j)
            m.transition(i, j) = i == j ? diag : (1.0 - diag) / static_cast<double>(k - 1);
    }
    m.initial = stationary_distribution(m.transition);
    return m;
}

FitReport run_start(const Data& data, const EmConfig& config, std::uint64_t seed) {
    FitReport rep;
    rep.model = initial_model(data, config.k, seed);
    double previous = -std::numeric_limits<double>::infinity();
    for (;;) {
        const FilterOutput f = hamilton_filter(rep.model, data.panel);
        rep.log_likelihood_trace.push_back(f.log_likelihood);
        rep.log_likelihood = f.log_likelihood;
        if (std::isfinite(previous) &&
            std::abs(f.log_likelihood - previous) <= config.tolerance * std::max(1.0, std::abs(previous))) {
            rep.converged = true;
            break;
        }
        if (rep.iterations >= config.max_iterations) break;
        previous = f.log_likelihood;
        const SmootherResult e = kim_smooth_with_transitions(rep.model, f);
        m_step(data, e, rep.model, rep.variance_floor_applied);
        ++rep.iterations;
    }
    return rep;
}

FitReport closed_form_single_state(const Data& data) {
    FitReport rep;
    rep.model.p = data.p;
    rep.model.states.resize(1);
    rep.model.transition = Matrix(1, 1, 1.0);
    rep.model.initial = Vector{1.0};
    const Vector ones(data.rows, 1.0);
    if (!m_step_state(data, ones, rep.model.states[0], rep.variance_floor_applied))
        throw NumericError("regressors are collinear; cannot fit the single-state model");
    rep.iterations = 1;
    rep.converged = true;
    rep.log_likelihood = hamilton_filter(rep.model, data.panel).log_likelihood;
    rep.log_likelihood_trace = {rep.log_likelihood};
    return rep;
}

template <class Fn>
void for_each_start(std::size_t count, unsigned workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (!error) error = std::current_exception();
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

FitReport em_fit(const data::ReturnPanel& panel, const EmConfig& config) {
    panel.validate_shape();
    if (config.k == 0) throw ConfigError("number of states must be at least 1");
    if (config.starts == 0) throw ConfigError("at least one EM start is required");
    if (!(config.tolerance > 0.0)) throw ConfigError("EM tolerance must be positive");
    if (panel.num_periods() <= config.p + 1) throw ConfigError("panel is too short for the autoregressive order");
    const Data data = prepare(panel, config.p);

    FitReport best;
    if (config.k == 1) {
        best = closed_form_single_state(data);
    } else {
        std::vector<FitReport> runs(config.starts);
        std::vector<bool> ok(config.starts, false);
        for_each_start(config.starts, config.workers, [&](std::size_t s) {
            try {
                runs[s] = run_start(data, config, config.seed + s);
                ok[s] = true;
            } catch (const NumericError&) {
                // A start that collapses numerically is discarded.
            }
        });
        std::size_t chosen = config.starts;
        for (std::size_t s = 0; s < config.starts; ++s)
            if (ok[s] && (chosen == config.starts || runs[s].log_likelihood > runs[chosen].log_likelihood)) chosen = s;
        if (chosen == config.starts) throw NumericError("every EM start failed numerically");
        best = std::move(runs[chosen]);
        best.best_start = chosen;
        best.model = relabel_bear_first(best.model);
    }

    const std::size_t d = panel.num_assets();
    best.observations = data.rows;
    best.parameters = count_parameters(config.k, config.p, d);
    const double q = static_cast<double>(best.parameters);
    best.aic = 2.0 * q - 2.0 * best.log_likelihood;
    best.bic = q * std::log(static_cast<double>(data.rows)) - 2.0 * best.log_likelihood;
    const double advisory = 10.0 * static_cast<double>(config.k) *
                            static_cast<double>(d + config.p * d * d);
    if (static_cast<double>(panel.num_periods()) < advisory)
        best.warnings.push_back("sample of " + std::to_string(panel.num_periods()) +
                                " periods is below the advisory minimum of " +
                                std::to_string(static_cast<std::size_t>(advisory)));
    if (best.variance_floor_applied) best.warnings.push_back("variance floor applied to a collapsing state");
    if (!best.converged) best.warnings.push_back("EM stopped at the iteration limit before converging");
    best.probabilities = kim_smooth(best.model, hamilton_filter(best.model, panel));
    return best;
}

}  // namespace allockit::regime
