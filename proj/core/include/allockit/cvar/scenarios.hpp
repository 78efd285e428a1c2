#pragma once

#include <span>
#include <string>
#include <vector>

#include "allockit/data/series.hpp"
#include "allockit/numerics/matrix.hpp"
#include "allockit/weights.hpp"

namespace allockit::cvar {

/// S scenarios of per-period returns for N assets, with scenario probabilities.
struct ScenarioMatrix {
    std::vector<std::string> asset_ids;
    numerics::Matrix scenarios;  ///< S × N
    numerics::Vector probabilities;

    std::size_t num_scenarios() const noexcept { return scenarios.rows(); }
    std::size_t num_assets() const noexcept { return scenarios.cols(); }

    /// Probability-weighted mean return of each asset.
    numerics::Vector mean_returns() const;

    /// Throws DataError unless S ≥ 2, labels match, probabilities are ≥ 0 and sum to 1 within 1e-12.
    void validate() const;

    static ScenarioMatrix equally_likely(std::vector<std::string> asset_ids, numerics::Matrix scenarios);
    static ScenarioMatrix from_panel(const data::ReturnPanel& panel);
};

/// loss_s = −Σ_j w_j · y_sj. Weights must be labelled exactly like the scenarios.
numerics::Vector portfolio_loss_scenarios(const WeightVector& w, const ScenarioMatrix& sc);

struct RiskMeasure {
    double var = 0.0;
    double cvar = 0.0;
};

/// VaR is the smallest loss whose cumulative probability reaches alpha; CVaR is
/// var + E[(L − var)₊] / (1 − alpha). Alpha must lie in (0.5, 1).
RiskMeasure empirical_var_cvar(std::span<const double> losses, std::span<const double> probabilities, double alpha);

/// Equal scenario probabilities.
RiskMeasure empirical_var_cvar(std::span<const double> losses, double alpha);

void validate_alpha(double alpha);

}  // namespace allockit::cvar
