#include "allockit/numerics/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "allockit/error.hpp"

namespace allockit::numerics {

void LinearProgram::validate() const {
    const std::size_t n = num_variables();
    if (lower.size() != n || upper.size() != n)
        throw NumericError("bound vectors do not match the number of variables");
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
            throw NumericError("invalid bounds for variable " + std::to_string(j));
        if (lower[j] == kInfinity || upper[j] == -kInfinity)
            throw NumericError("variable " + std::to_string(j) + " has an empty domain");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (constraints[i].coefficients.size() != n)
            throw NumericError("constraint " + std::to_string(i) + " has wrong width");
        if (!std::isfinite(constraints[i].rhs))
            throw NumericError("constraint " + std::to_string(i) + " has non-finite rhs");
    }
}

std::string_view to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

// How an original variable maps onto nonnegative standard-form columns.
struct VariableMap {
    enum class Kind { shifted, reflected, split } kind;
    std::size_t column;  // split variables also own column + 1
    double anchor;       // lower bound (shifted) or upper bound (reflected)
};

class Tableau {
public:
    Tableau(Matrix a, Vector b, Vector upper, std::size_t num_artificial, const LpOptions& opt)
        : a_(std::move(a)),
          b_(std::move(b)),
          upper_(std::move(upper)),
          m_(a_.rows()),
          n_(a_.cols()),
          first_artificial_(n_ - num_artificial),
          opt_(opt),
          t_(a_),
          beta_(b_),
          basis_(m_),
          at_upper_(n_, false),
          is_basic_(n_, false) {
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = first_artificial_ + i;
            is_basic_[basis_[i]] = true;
        }
    }

    enum class Outcome { optimal, unbounded, iteration_limit };

    Outcome run(const Vector& cost, bool allow_artificial) {
        Vector reduced(n_);
        for (;;) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) {
                    reduced[j] = 0.0;
                    continue;
                }
                double d = cost[j];
                for (std::size_t i = 0; i < m_; ++i) d -= cost[basis_[i]] * t_(i, j);
                reduced[j] = d;
            }

            // Bland: lowest-index improving column.
            std::size_t entering = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                if (!allow_artificial && j >= first_artificial_) continue;
                if (!at_upper_[j] && reduced[j] < -opt_.pivot_tolerance && upper_[j] > 0.0) {
                    entering = j;
                    break;
                }
                if (at_upper_[j] && reduced[j] > opt_.pivot_tolerance) {
                    entering = j;
                    break;
                }
            }
            if (entering == n_) return Outcome::optimal;
            if (pivots_ >= opt_.max_pivots) return Outcome::iteration_limit;

            const double dir = at_upper_[entering] ? -1.0 : 1.0;
            const bool strict_bland = degenerate_run_ > kDegenerateRunLimit;
            const Leaving leave = choose_leaving(entering, dir, strict_bland);
            const double best = leave.step;
            const std::size_t leave_row = leave.row;
            const bool leave_to_upper = leave.to_upper;

            ++pivots_;
            const double range = upper_[entering];
            if (leave_row == m_ && !std::isfinite(range)) return Outcome::unbounded;

            if (range <= best) {
                // Bound flip: the entering column crosses its own range first.
                for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * range * t_(i, entering);
                at_upper_[entering] = !at_upper_[entering];
                degenerate_run_ = 0;
                continue;
            }
            degenerate_run_ = best > 0.0 ? 0 : degenerate_run_ + 1;

            for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * best * t_(i, entering);
            const double entering_value = at_upper_[entering] ? range - best : best;
            const std::size_t leaving = basis_[leave_row];
            at_upper_[leaving] = leave_to_upper;
            is_basic_[leaving] = false;
            pivot(leave_row, entering);
            beta_[leave_row] = entering_value;
            if (pivots_ % kReinvertInterval == 0) reinvert();
        }
    }

    // Rebuilds B⁻¹A and the basic values from the original data, discarding the
    // rounding error accumulated by successive pivots.
    void reinvert() {
        Matrix lu(m_, m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t k = 0; k < m_; ++k) lu(i, k) = a_(i, basis_[k]);
        Matrix rhs = a_;
        // Gaussian elimination with partial pivoting on [B | A].
        std::vector<std::size_t> perm(m_);
        for (std::size_t i = 0; i < m_; ++i) perm[i] = i;
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < m_; ++i)
                if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
            if (lu(p, k) == 0.0) return;  // keep the current tableau; B is numerically singular
            if (p != k) {
                for (std::size_t c = 0; c < m_; ++c) std::swap(lu(p, c), lu(k, c));
                for (std::size_t c = 0; c < n_; ++c) std::swap(rhs(p, c), rhs(k, c));
            }
            for (std::size_t i = k + 1; i < m_; ++i) {
                const double f = lu(i, k) / lu(k, k);
                if (f == 0.0) continue;
                for (std::size_t c = k; c < m_; ++c) lu(i, c) -= f * lu(k, c);
                for (std::size_t c = 0; c < n_; ++c) rhs(i, c) -= f * rhs(k, c);
            }
        }
        for (std::size_t k = m_; k-- > 0;) {
            for (std::size_t c = 0; c < n_; ++c) {
                double v = rhs(k, c);
                for (std::size_t j = k + 1; j < m_; ++j) v -= lu(k, j) * rhs(j, c);
                rhs(k, c) = v / lu(k, k);
            }
        }
        t_ = std::move(rhs);
        for (std::size_t k = 0; k < m_; ++k)
            for (std::size_t i = 0; i < m_; ++i) t_(i, basis_[k]) = i == k ? 1.0 : 0.0;
        refresh_basic_values();
    }

    // Removes artificial columns from the basis after phase one. Rows where no structural
    // column can replace the artificial are redundant and keep it pinned at zero.
    void expel_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < first_artificial_) continue;
            std::size_t best_col = n_;
            double best_mag = opt_.pivot_tolerance;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (is_basic_[j]) continue;
                if (std::abs(t_(r, j)) > best_mag) {
                    best_mag = std::abs(t_(r, j));
                    best_col = j;
                }
            }
            if (best_col == n_) continue;
            const std::size_t leaving = basis_[r];
            const double value = at_upper_[best_col] ? upper_[best_col] : 0.0;
            at_upper_[leaving] = false;
            is_basic_[leaving] = false;
            pivot(r, best_col);
            beta_[r] = value;
        }
        for (std::size_t j = first_artificial_; j < n_; ++j) upper_[j] = 0.0;
        reinvert();
    }

    double artificial_sum() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= first_artificial_) s += std::abs(beta_[i]);
        return s;
    }

    // Recomputes basic values from the original data using B⁻¹, which sits in the
    // artificial block of the tableau because those columns started as the identity.
    void refresh_basic_values() {
        Vector rhs = b_;
        for (std::size_t j = 0; j < n_; ++j) {
            if (is_basic_[j] || !at_upper_[j]) continue;
            for (std::size_t i = 0; i < m_; ++i) rhs[i] -= a_(i, j) * upper_[j];
        }
        for (std::size_t i = 0; i < m_; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < m_; ++k) s += t_(i, first_artificial_ + k) * rhs[k];
            beta_[i] = s;
        }
    }

    Vector values() const {
        Vector x(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j)
            if (!is_basic_[j] && at_upper_[j]) x[j] = upper_[j];
        for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = beta_[i];
        return x;
    }

    // y = c_Bᵀ B⁻¹
    Vector row_multipliers(const Vector& cost) const {
        Vector y(m_, 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += cost[basis_[i]] * t_(i, first_artificial_ + k);
            y[k] = s;
        }
        return y;
    }

    std::size_t pivots() const noexcept { return pivots_; }

private:
    static constexpr std::size_t kReinvertInterval = 50;
    static constexpr std::size_t kDegenerateRunLimit = 200;

    struct Leaving {
        std::size_t row;
        double step;
        bool to_upper;
    };

    // Distance basic row i may move along the entering direction before hitting a bound,
    // with the bound optionally relaxed by `slack`; false when the row never blocks.
    bool blocking(std::size_t i, double alpha, double slack, double& step, bool& to_upper) const {
        if (alpha > opt_.pivot_tolerance) {
            step = (std::max(beta_[i], 0.0) + slack) / alpha;
            to_upper = false;
            return true;
        }
        if (alpha < -opt_.pivot_tolerance && std::isfinite(upper_[basis_[i]])) {
            step = (std::max(upper_[basis_[i]] - beta_[i], 0.0) + slack) / -alpha;
            to_upper = true;
            return true;
        }
        return false;
    }

    // Harris two-pass ratio test: among rows whose exact ratio lies within the relaxed
    // minimum, take the largest pivot. Ties, and the strict fallback used after a long
    // run of degenerate pivots, go to the lowest basic index as in Bland's rule.
    Leaving choose_leaving(std::size_t entering, double dir, bool strict_bland) const {
        const double slack = strict_bland ? 0.0 : opt_.feasibility_tolerance;
        double bound = kInfinity;
        for (std::size_t i = 0; i < m_; ++i) {
            double step;
            bool up;
            if (blocking(i, dir * t_(i, entering), slack, step, up)) bound = std::min(bound, step);
        }
        Leaving best{m_, kInfinity, false};
        double best_mag = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double alpha = dir * t_(i, entering);
            double step;
            bool up;
            if (!blocking(i, alpha, 0.0, step, up) || step > bound + (strict_bland ? 1e-12 : 0.0)) continue;
            const double mag = std::abs(alpha);
            bool take = best.row == m_;
            if (!take) {
                if (strict_bland)
                    take = step < best.step - 1e-12 ||
                           (step <= best.step + 1e-12 && basis_[i] < basis_[best.row]);
                else
                    take = mag > best_mag || (mag == best_mag && basis_[i] < basis_[best.row]);
            }
            if (take) {
                best = {i, step, up};
                best_mag = mag;
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t q) {
        const double p = t_(r, q);
        for (std::size_t j = 0; j < n_; ++j) t_(r, j) /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = t_(i, q);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) t_(i, j) -= f * t_(r, j);
        }
        basis_[r] = q;
        is_basic_[q] = true;
    }

    Matrix a_;
    Vector b_;
    Vector upper_;
    std::size_t m_;
    std::size_t n_;
    std::size_t first_artificial_;
    LpOptions opt_;
    Matrix t_;
    Vector beta_;
    std::vector<std::size_t> basis_;
    std::vector<bool> at_upper_;
    std::vector<bool> is_basic_;
    std::size_t pivots_ = 0;
    std::size_t degenerate_run_ = 0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options) {
    lp.validate();
    const std::size_t n = lp.num_variables();
    const std::size_t m = lp.constraints.size();

    std::vector<VariableMap> maps;
    maps.reserve(n);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(lp.lower[j])) {
            maps.push_back({VariableMap::Kind::shifted, cols++, lp.lower[j]});
        } else if (std::isfinite(lp.upper[j])) {
            maps.push_back({VariableMap::Kind::reflected, cols++, lp.upper[j]});
        } else {
            maps.push_back({VariableMap::Kind::split, cols, 0.0});
            cols += 2;
        }
    }
    const std::size_t structural = cols;
    std::size_t slacks = 0;
    for (const auto& c : lp.constraints)
        if (c.relation != Relation::equal) ++slacks;
    const std::size_t total = structural + slacks + m;

    Matrix a(m, total);
    Vector b(m);
    Vector upper(total, kInfinity);
    Vector cost(total, 0.0);
    Vector row_sign(m, 1.0);

    for (std::size_t j = 0; j < n; ++j) {
        const auto& map = maps[j];
        switch (map.kind) {
            case VariableMap::Kind::shifted:
                upper[map.column] = lp.upper[j] - lp.lower[j];
                cost[map.column] = lp.objective[j];
                break;
            case VariableMap::Kind::reflected:
                cost[map.column] = -lp.objective[j];
                break;
            case VariableMap::Kind::split:
                cost[map.column] = lp.objective[j];
                cost[map.column + 1] = -lp.objective[j];
                break;
        }
    }

    std::size_t slack_col = structural;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& con = lp.constraints[i];
        double rhs = con.rhs;
        for (std::size_t j = 0; j < n; ++j) {
            const double coef = con.coefficients[j];
            if (coef == 0.0) continue;
            const auto& map = maps[j];
            switch (map.kind) {
                case VariableMap::Kind::shifted:
                    a(i, map.column) = coef;
                    rhs -= coef * map.anchor;
                    break;
                case VariableMap::Kind::reflected:
                    a(i, map.column) = -coef;
                    rhs -= coef * map.anchor;
                    break;
                case VariableMap::Kind::split:
                    a(i, map.column) = coef;
                    a(i, map.column + 1) = -coef;
                    break;
            }
        }
        if (con.relation == Relation::less_equal) a(i, slack_col++) = 1.0;
        if (con.relation == Relation::greater_equal) a(i, slack_col++) = -1.0;
        if (rhs < 0.0) {
            row_sign[i] = -1.0;
            rhs = -rhs;
            for (std::size_t j = 0; j < structural + slacks; ++j) a(i, j) = -a(i, j);
        }
        a(i, structural + slacks + i) = 1.0;
        b[i] = rhs;
    }

    Tableau tab(a, b, upper, m, options);
    LpSolution sol;

    Vector phase_one_cost(total, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase_one_cost[structural + slacks + i] = 1.0;
    auto outcome = tab.run(phase_one_cost, true);
    if (outcome == Tableau::Outcome::iteration_limit) {
        sol.status = LpStatus::iteration_limit;
        sol.pivots = tab.pivots();
        return sol;
    }
    const double scale = std::max(1.0, norm_inf(b));
    if (tab.artificial_sum() > options.feasibility_tolerance * scale) {
        sol.status = LpStatus::infeasible;
        sol.pivots = tab.pivots();
        return sol;
    }
    tab.expel_artificials();

    outcome = tab.run(cost, false);
    sol.pivots = tab.pivots();
    if (outcome == Tableau::Outcome::unbounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }
    if (outcome == Tableau::Outcome::iteration_limit) {
        sol.status = LpStatus::iteration_limit;
        return sol;
    }
    tab.reinvert();

    const Vector y = tab.values();
    sol.status = LpStatus::optimal;
    sol.primal.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& map = maps[j];
        switch (map.kind) {
            case VariableMap::Kind::shifted: sol.primal[j] = map.anchor + y[map.column]; break;
            case VariableMap::Kind::reflected: sol.primal[j] = map.anchor - y[map.column]; break;
            case VariableMap::Kind::split: sol.primal[j] = y[map.column] - y[map.column + 1]; break;
        }
    }
    sol.objective = dot(lp.objective, sol.primal);

    const Vector mult = tab.row_multipliers(cost);
    sol.duals.resize(m);
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sol.duals[i] = row_sign[i] * mult[i];
        dual_obj += sol.duals[i] * lp.constraints[i].rhs;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double r = lp.objective[j];
        for (std::size_t i = 0; i < m; ++i) r -= sol.duals[i] * lp.constraints[i].coefficients[j];
        if (r > 0.0 && std::isfinite(lp.lower[j])) dual_obj += r * lp.lower[j];
        if (r < 0.0 && std::isfinite(lp.upper[j])) dual_obj += r * lp.upper[j];
    }
    sol.dual_objective = dual_obj;
    return sol;
}

}  // namespace allockit::numerics
