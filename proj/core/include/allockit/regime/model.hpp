#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "allockit/data/series.hpp"
#include "allockit/numerics/matrix.hpp"

namespace allockit::regime {

/// Parameters of one regime: y_t = intercept + Σ_j ar[j]·y_{t−1−j} + ε, ε ~ N(0, covariance).
struct StateParams {
    numerics::Vector intercept;
    std::vector<numerics::Matrix> ar;  ///< p matrices, each dims × dims
    numerics::SymMatrix covariance;
};

/// k-state Markov-switching VAR(p) over `dims` series.
struct MsModel {
    std::size_t p = 0;
    std::vector<StateParams> states;
    numerics::Matrix transition;  ///< row i: Pr(S_{t+1} = j | S_t = i)
    numerics::Vector initial;     ///< distribution of the first filtered state

    std::size_t k() const noexcept { return states.size(); }
    std::size_t dims() const noexcept { return states.empty() ? 0 : states.front().intercept.size(); }

    /// Conditional mean of state s at row t of `y` (rows before t are the lags).
    numerics::Vector conditional_mean(std::size_t s, const numerics::Matrix& y, std::size_t t) const;

    /// Throws ConfigError on inconsistent shapes, non-stochastic P or π₀,
    /// and NotPositiveDefinite on a singular covariance.
    void validate() const;

    /// Model with i.i.d. Gaussian states (p = 0) and π₀ set to the stationary distribution of P.
    static MsModel gaussian(std::vector<numerics::Vector> means, std::vector<numerics::SymMatrix> covariances,
                            numerics::Matrix transition);
};

/// Left eigenvector of P for eigenvalue 1, solved directly from (Pᵀ − I)π = 0, Σπ = 1.
numerics::Vector stationary_distribution(const numerics::Matrix& transition);

struct Simulation {
    data::ReturnPanel panel;
    std::vector<std::size_t> states;
};

/// Draws T rows. The first state comes from π₀; pre-sample lags are taken as zero.
/// Deterministic for a given seed.
Simulation simulate(const MsModel& model, std::size_t periods, std::uint64_t seed,
                    std::vector<std::string> asset_ids = {});

}  // namespace allockit::regime
