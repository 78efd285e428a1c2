#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "allockit/numerics/matrix.hpp"

namespace allockit::numerics {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { equal, less_equal, greater_equal };

struct LinearConstraint {
    Vector coefficients;
    Relation relation = Relation::equal;
    double rhs = 0.0;
};

/// minimize cᵀx subject to the listed constraints and lower ≤ x ≤ upper.
/// Bounds may be infinite; a fresh program has every variable in [0, +inf).
struct LinearProgram {
    Vector objective;
    std::vector<LinearConstraint> constraints;
    Vector lower;
    Vector upper;

    LinearProgram() = default;
    explicit LinearProgram(std::size_t num_variables)
        : objective(num_variables, 0.0), lower(num_variables, 0.0), upper(num_variables, kInfinity) {}

    std::size_t num_variables() const noexcept { return objective.size(); }

    void add_constraint(Vector coefficients, Relation relation, double rhs) {
        constraints.push_back({std::move(coefficients), relation, rhs});
    }

    /// Throws NumericError on inconsistent dimensions or lower > upper.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vector primal;
    double objective = 0.0;
    /// One multiplier per constraint, in input order. For a minimization, `≤` rows carry
    /// nonpositive and `≥` rows nonnegative multipliers; equality rows are free.
    Vector duals;
    /// bᵀy plus the bound terms of the reduced costs; equals `objective` at optimality.
    double dual_objective = 0.0;
    std::size_t pivots = 0;

    bool optimal() const noexcept { return status == LpStatus::optimal; }
};

struct LpOptions {
    double pivot_tolerance = 1e-9;
    double feasibility_tolerance = 1e-9;
    std::size_t max_pivots = 1'000'000;
};

/// Dense two-phase bounded-variable primal simplex with Bland's rule.
///
/// Free variables are split, one-sided upper-bounded variables are reflected and finite
/// lower bounds are shifted to zero; finite upper bounds stay implicit in the ratio test.
/// Deterministic for identical input.
LpSolution lp_solve(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace allockit::numerics
